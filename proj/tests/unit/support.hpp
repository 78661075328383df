#pragma once

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "sqw/types.hpp"

namespace sqw::test {

// int d^2a/pi f(a) over [-half, half]^2, composite 20-point Gauss-Legendre
// with `panels` panels per axis. For smooth, Gaussian-decaying integrands.
inline cplx box_integral(const std::function<cplx(cplx)>& f, double half, int panels = 40) {
  using boost::math::quadrature::gauss;
  const auto& x = gauss<double, 20>::abscissa();
  const auto& w = gauss<double, 20>::weights();
  std::vector<double> nodes, weights;
  const double h = 2.0 * half / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = -half + (p + 0.5) * h;
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (double sgn : {-1.0, 1.0}) {
        if (x[i] == 0.0 && sgn < 0.0) continue;
        nodes.push_back(mid + sgn * 0.5 * h * x[i]);
        weights.push_back(0.5 * h * w[i]);
      }
    }
  }
  cplx sum{0.0};
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    cplx row{0.0};
    for (std::size_t i = 0; i < nodes.size(); ++i) row += weights[i] * f({nodes[i], nodes[j]});
    sum += weights[j] * row;
  }
  return sum / kPi;
}

inline cplx plane_integral(const std::function<cplx(cplx)>& f) { return box_integral(f, 12.0); }

// Real line, for time integrals.
inline cplx line_integral(const std::function<cplx(double)>& f, double a, double b, double tol = 1e-13) {
  using boost::math::quadrature::gauss_kronrod;
  const double re = gauss_kronrod<double, 61>::integrate([&](double s) { return f(s).real(); }, a, b, 15, tol);
  const double im = gauss_kronrod<double, 61>::integrate([&](double s) { return f(s).imag(); }, a, b, 15, tol);
  return {re, im};
}

}  // namespace sqw::test
