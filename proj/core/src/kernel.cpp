#include "sqw/kernel.hpp"

#include <cmath>

#include "sqw/errors.hpp"

namespace sqw {

namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

double binomial(int n, int k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

cplx ipow(cplx z, int k) {
  cplx out{1.0};
  for (int i = 0; i < k; ++i) out *= z;
  return out;
}

}  // namespace

cplx quadratic_norm(const OrderingVector& r) { return r.r1 * r.r1 + r.r2 * r.r2 + r.r3 * r.r3; }

std::array<double, 2> RealQuadraticForm::eigenvalues() const {
  const double mid = 0.5 * (xx + yy);
  const double rad = std::hypot(0.5 * (xx - yy), xy);
  return {mid - rad, mid + rad};
}

bool RealQuadraticForm::negative_definite(double threshold) const { return eigenvalues()[1] < threshold; }

RealQuadraticForm exponent_form(const OrderingVector& r) {
  const cplx rr = quadratic_norm(r);
  if (rr == 0.0) return {};
  const cplx xx = -(2.0 * kI * r.r2 + 2.0 * r.r3) / rr;
  const cplx yy = -(-2.0 * kI * r.r2 + 2.0 * r.r3) / rr;
  const cplx xy = -2.0 * kI * r.r1 / rr;
  return {xx.real(), xy.real(), yy.real()};
}

bool is_decaying(const OrderingVector& r, double threshold) {
  if (quadratic_norm(r) == 0.0) return false;
  return exponent_form(r).negative_definite(threshold);
}

std::array<double, 2> kernel_widths(const OrderingVector& r) {
  if (!is_decaying(r)) throw DivergentKernel("kernel_widths: ordering vector is not decaying");
  const auto ev = exponent_form(r).eigenvalues();
  return {1.0 / std::sqrt(-2.0 * ev[0]), 1.0 / std::sqrt(-2.0 * ev[1])};
}

cplx eval_kernel(const OrderingVector& r, ComplexPoint alpha, double norm_epsilon) {
  const cplx rr = quadratic_norm(r);
  if (std::abs(rr) <= norm_epsilon) throw ZeroQuadraticNorm("eval_kernel: r.r vanishes");
  const cplx a = alpha.value();
  const cplx a2 = a * a;
  const cplx ac2 = std::conj(a2);
  const double n2 = std::norm(a);
  const cplx q = r.r1 * (a2 - ac2) + kI * r.r2 * (a2 + ac2) + 2.0 * r.r3 * n2;
  return 2.0 / std::sqrt(rr) * std::exp(-q / rr);
}

OrderingVector convolve_orderings(const OrderingVector& r, const OrderingVector& s) { return r + s; }

OrderingVector rotate_ordering(const OrderingVector& r, double theta) {
  // The exponent is (r1 + i r2) a^2 + (i r2 - r1) a*^2 + 2 r3 |a|^2.
  const cplx ph = std::polar(1.0, 2.0 * theta);
  const cplx u = (r.r1 + kI * r.r2) * ph;
  const cplx v = (kI * r.r2 - r.r1) / ph;
  return {0.5 * (u - v), -0.5 * kI * (u + v), r.r3};
}

cplx kernel_transform(const OrderingVector& r, cplx xi) {
  const cplx q = -2.0 * r.r3 * std::norm(xi) + (r.r1 - kI * r.r2) * std::conj(xi * xi) - (r.r1 + kI * r.r2) * xi * xi;
  return std::exp(0.25 * q);
}

cplx kernel_moment(const OrderingVector& r, int j, int k) {
  // Generating function exp(A s t + B s^2 + C t^2) for E[exp(s b + t b*)].
  const cplx A = 0.5 * r.r3;
  const cplx B = 0.25 * (r.r1 - kI * r.r2);
  const cplx C = -0.25 * (r.r1 + kI * r.r2);
  cplx sum{0.0};
  for (int a = 0; a <= std::min(j, k); ++a) {
    if ((j - a) % 2 != 0 || (k - a) % 2 != 0) continue;
    const int b = (j - a) / 2;
    const int c = (k - a) / 2;
    sum += ipow(A, a) * ipow(B, b) * ipow(C, c) / (factorial(a) * factorial(b) * factorial(c));
  }
  return factorial(j) * factorial(k) * sum;
}

cplx GaussianPhaseFunction::operator()(ComplexPoint alpha) const {
  return weight * eval_kernel(ordering, scale * alpha.value() - mean.value());
}

cplx phase_function_moment(const GaussianPhaseFunction& f, int m, int n) {
  const cplx mu = f.mean.value();
  cplx sum{0.0};
  for (int i = 0; i <= m; ++i) {
    for (int j = 0; j <= n; ++j) {
      sum += binomial(m, i) * binomial(n, j) * ipow(std::conj(mu), m - i) * ipow(mu, n - j) *
             kernel_moment(f.ordering, j, i);
    }
  }
  return f.weight / std::pow(f.scale, 2 + m + n) * sum;
}

cplx normal_ordered_moment(const GaussianPhaseFunction& wigner, int m, int n) {
  // Smoothing w g_s(c a - mu) with g_r gives w g_{s + c^2 r}(c a - mu); the P function sits at r = (0,0,-1).
  GaussianPhaseFunction p = wigner;
  p.ordering = wigner.ordering + OrderingVector{0.0, 0.0, -wigner.scale * wigner.scale};
  return phase_function_moment(p, m, n);
}

}  // namespace sqw
