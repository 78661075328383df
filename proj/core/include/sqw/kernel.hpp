#pragma once

#include <array>

#include "sqw/types.hpp"

namespace sqw {

// Parameters (r1, r2, r3) of a normalized Gaussian on the complex plane,
//   g_r(a) = 2/sqrt(rr) exp(-(r1 (a^2 - a*^2) + i r2 (a^2 + a*^2) + 2 r3 |a|^2) / rr)
// with rr = r1^2 + r2^2 + r3^2. Kernels compose under convolution by adding r.
struct OrderingVector {
  cplx r1{0.0};
  cplx r2{0.0};
  cplx r3{0.0};

  OrderingVector operator+(const OrderingVector& o) const { return {r1 + o.r1, r2 + o.r2, r3 + o.r3}; }
  OrderingVector operator-(const OrderingVector& o) const { return {r1 - o.r1, r2 - o.r2, r3 - o.r3}; }
  OrderingVector operator-() const { return {-r1, -r2, -r3}; }
  OrderingVector operator*(double c) const { return {c * r1, c * r2, c * r3}; }
  bool is_zero() const { return r1 == 0.0 && r2 == 0.0 && r3 == 0.0; }
};

inline OrderingVector operator*(double c, const OrderingVector& r) { return r * c; }

inline constexpr double kDefaultNormEpsilon = 1e-300;
inline constexpr double kDecayThreshold = -1e-12;

cplx quadratic_norm(const OrderingVector& r);

// Real part of the kernel exponent written as xx x^2 + 2 xy x y + yy y^2.
struct RealQuadraticForm {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;

  // Ascending.
  std::array<double, 2> eigenvalues() const;
  bool negative_definite(double threshold = kDecayThreshold) const;
};

RealQuadraticForm exponent_form(const OrderingVector& r);
bool is_decaying(const OrderingVector& r, double threshold = kDecayThreshold);

// Standard deviations along the principal axes, {narrow, wide}. Requires a decaying r.
std::array<double, 2> kernel_widths(const OrderingVector& r);

cplx eval_kernel(const OrderingVector& r, ComplexPoint alpha, double norm_epsilon = kDefaultNormEpsilon);

OrderingVector convolve_orderings(const OrderingVector& r, const OrderingVector& s);

// Ordering of the rotated kernel: g_{r'}(b) = g_r(exp(i theta) b).
OrderingVector rotate_ordering(const OrderingVector& r, double theta);

// K_r(xi) = int d^2b/pi g_r(b) exp(b xi* - b* xi). Entire in r; K_{r+s} = K_r K_s.
cplx kernel_transform(const OrderingVector& r, cplx xi);

// E[b^j b*^k] under g_r, continued analytically to any r.
cplx kernel_moment(const OrderingVector& r, int j, int k);

// value(a) = weight * g_ordering(scale * a - mean)
struct GaussianPhaseFunction {
  ComplexPoint mean;
  OrderingVector ordering{0.0, 0.0, 1.0};
  double weight = 1.0;
  double scale = 1.0;

  cplx operator()(ComplexPoint alpha) const;
  double mass() const { return weight / (scale * scale); }
};

// int d^2a/pi f(a) a*^m a^n
cplx phase_function_moment(const GaussianPhaseFunction& f, int m, int n);

// Tr[rho a^dag^m a^n] for the state whose Wigner function is f.
cplx normal_ordered_moment(const GaussianPhaseFunction& wigner, int m, int n);

}  // namespace sqw
