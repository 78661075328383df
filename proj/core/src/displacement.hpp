#pragma once

#include <cmath>

#include "sqw/types.hpp"

namespace sqw::detail {

// Calls emit(m, n, <m|D(beta)|n>) for every m, n < N. Uses
//   <m|D|n> = sqrt(n!/m!) beta^{m-n} e^{-|beta|^2/2} L_n^{(m-n)}(|beta|^2),  m >= n,
// and (-beta*)^{n-m} for the upper triangle. The Laguerre polynomials come from
// their three-term recurrence in the degree, which is stable here; the column
// recurrence in n is not and must not be used.
template <class F>
void visit_displacement(cplx beta, int N, F&& emit) {
  const double r = std::abs(beta);
  if (r == 0.0) {
    for (int j = 0; j < N; ++j) emit(j, j, cplx{1.0});
    return;
  }
  const double x = r * r;
  const cplx u = beta / r;
  const bool log_path = x > 500.0 || N > 150;
  constexpr double kBig = 1e150;
  const double log_big = std::log(kBig);
  cplx ph_lo{1.0};
  cplx ph_up{1.0};
  for (int k = 0; k < N; ++k) {
    double logp = k * std::log(r) - 0.5 * x - 0.5 * std::lgamma(k + 1.0);
    double p = log_path ? 0.0 : std::exp(logp);
    double L = 1.0;
    double Lm1 = 0.0;
    double log_scale = 0.0;
    for (int j = 0; j + k < N; ++j) {
      const double mag = log_path ? L * std::exp(logp + log_scale) : p * L;
      emit(j + k, j, mag * ph_lo);
      if (k > 0) emit(j, j + k, mag * ph_up);
      const double Lp1 = ((2.0 * j + 1.0 + k - x) * L - (j + k) * Lm1) / (j + 1.0);
      Lm1 = L;
      L = Lp1;
      const double step = std::sqrt((j + 1.0) / (j + k + 1.0));
      if (log_path) {
        logp += std::log(step);
        if (std::abs(L) > kBig) {
          L /= kBig;
          Lm1 /= kBig;
          log_scale += log_big;
        }
      } else {
        p *= step;
      }
    }
    ph_lo *= u;
    ph_up *= -std::conj(u);
  }
}

}  // namespace sqw::detail
