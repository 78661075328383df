#pragma once

#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace sqw {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

struct ComplexPoint {
  double re = 0.0;
  double im = 0.0;

  ComplexPoint() = default;
  ComplexPoint(double r, double i) : re(r), im(i) {}
  ComplexPoint(cplx z) : re(z.real()), im(z.imag()) {}  // NOLINT implicit on purpose

  cplx value() const { return {re, im}; }
  operator cplx() const { return value(); }  // NOLINT
};

// Rotating frame of the free oscillation, or the lab frame.
enum class Frame { rotating, lab };

}  // namespace sqw
