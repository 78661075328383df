#pragma once

#include <cmath>

#include "sqw/types.hpp"

namespace sqw::detail {

template <class F>
cplx simpson_step(F& f, double a, double b, cplx fa, cplx fm, cplx fb, cplx whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const cplx flm = f(lm);
  const cplx frm = f(rm);
  const cplx left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const cplx right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const cplx delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

// Adaptive Simpson on [a, b]; tolerance relative to the size of the integral.
template <class F>
cplx adaptive_simpson(F f, double a, double b, double rel_tol) {
  if (b <= a) return cplx{0.0};
  const cplx fa = f(a);
  const cplx fb = f(b);
  const cplx fm = f(0.5 * (a + b));
  const cplx whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double scale = (b - a) * std::max({std::abs(fa), std::abs(fm), std::abs(fb)});
  const double tol = rel_tol * std::max(scale, 1e-300);
  return simpson_step(f, a, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace sqw::detail
