#include "sqw/gaussian_integral.hpp"

#include "sqw/errors.hpp"

namespace sqw {

RealQuadraticForm GaussianIntegralParams::form() const {
  return {(varsigma + f + g).real(), (kI * (f - g)).real(), (varsigma - f - g).real()};
}

bool GaussianIntegralParams::converges(double threshold) const { return form().negative_definite(threshold); }

cplx gaussian_integral(const GaussianIntegralParams& p) {
  if (!p.converges()) throw DivergentIntegral("gaussian_integral: quadratic form is not negative definite");
  const cplx det = p.varsigma * p.varsigma - 4.0 * p.f * p.g;
  // Both eigenvalues of the negated complex form have positive real part, so the
  // product of principal roots is the branch continuous from f = g = 0.
  const cplx tr = -2.0 * p.varsigma;
  const cplx disc = std::sqrt(tr * tr - 4.0 * det);
  const cplx sqrt_det = std::sqrt(0.5 * (tr + disc)) * std::sqrt(0.5 * (tr - disc));
  const cplx e = (-p.varsigma * p.xi * p.eta + p.xi * p.xi * p.g + p.eta * p.eta * p.f) / det;
  return std::exp(e) / sqrt_det;
}

}  // namespace sqw
