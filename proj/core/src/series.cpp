#include <cmath>
#include <sstream>

#include "sqw/errors.hpp"
#include "sqw/fock.hpp"

namespace sqw {

namespace {

// exp(X) for nilpotent X, summed until the powers vanish.
Matrix nilpotent_exp(const Matrix& x) {
  const int N = static_cast<int>(x.rows());
  Matrix out = Matrix::Identity(N, N);
  Matrix term = Matrix::Identity(N, N);
  for (int k = 1; k <= N; ++k) {
    term = term * x / static_cast<double>(k);
    if (term.cwiseAbs().maxCoeff() == 0.0) break;
    out += term;
  }
  return out;
}

// sum_k c^k/k! L^k X R^k, built by repeated conjugation X -> L X R.
struct SumInfo {
  Matrix value;
  int terms = 0;
  double last_norm = 0.0;
};

SumInfo conjugation_series(const Matrix& x, const Matrix& left, const Matrix& right, cplx c, int cap, double floor,
                           const char* what) {
  SumInfo out;
  out.value = x;
  out.terms = 1;
  out.last_norm = x.norm();
  Matrix term = x;
  for (int k = 1; k <= cap; ++k) {
    term = (c / static_cast<double>(k)) * (left * term * right);
    const double nrm = term.norm();
    if (!std::isfinite(nrm)) {
      std::ostringstream os;
      os << "series_propagate: overflow in the " << what << " sum at term " << k;
      throw NonConvergence(os.str());
    }
    out.value += term;
    out.terms = k + 1;
    out.last_norm = nrm;
    if (nrm < floor) return out;
  }
  if (out.last_norm >= floor && out.last_norm > 0.0) {
    std::ostringstream os;
    os << "series_propagate: " << what << " sum not converged after " << cap << " terms (last term norm "
       << out.last_norm << ")";
    throw NonConvergence(os.str());
  }
  return out;
}

}  // namespace

SeriesResult series_propagate(const FockDensityMatrix& rho0, const BathParams& bath, const DriveSpec& drive, double t,
                              const SeriesTruncation& trunc) {
  if (trunc.mn_max < 1 || trunc.pq_max < 1 || !(trunc.term_norm_floor > 0.0)) {
    throw ConfigError("series_propagate: truncation limits must be positive");
  }
  bath.validate();
  const int N = rho0.dim();
  const Ladder l = ladder_operators(N);
  const Matrix& a = l.lower;
  const Matrix& ad = l.raise;

  const PropagatorCoefficients c = propagator_coefficients(bath, drive, t);
  SeriesResult res;

  // Squeezing and displacement part.
  const Matrix e2 = nilpotent_exp(c.lambda2 * ad * ad);
  const Matrix e2c = nilpotent_exp(std::conj(c.lambda2) * a * a);
  const SumInfo inner = conjugation_series(e2c * rho0.entries * e2c, a, a, -2.0 * std::conj(c.lambda2), trunc.mn_max,
                                           trunc.term_norm_floor, "n");
  const SumInfo outer =
      conjugation_series(e2 * inner.value * e2, ad, ad, -2.0 * c.lambda2, trunc.mn_max, trunc.term_norm_floor, "m");
  const Matrix d1 = displacement(c.lambda1, N);
  const Matrix R = d1 * outer.value * d1.adjoint();
  res.mn_terms = std::max(inner.terms, outer.terms);

  // Thermalization part.
  const double nT = bath.nbar * c.T;
  const double cp = nT / (nT + 1.0);
  const double cq = (bath.nbar + 1.0) * c.T / (nT + 1.0);
  Eigen::VectorXcd e(N);
  for (int n = 0; n < N; ++n) e(n) = std::pow(c.A, n);
  const SumInfo q = conjugation_series(R, a, ad, cq, trunc.pq_max, trunc.term_norm_floor, "q");
  const Matrix scaled = e.asDiagonal() * q.value * e.asDiagonal();
  const SumInfo p = conjugation_series(scaled, ad, a, cp, trunc.pq_max, trunc.term_norm_floor, "p");
  res.pq_terms = std::max(q.terms, p.terms);
  res.last_term_norm = std::max({inner.last_norm, outer.last_norm, q.last_norm, p.last_norm});

  res.rho = FockDensityMatrix(p.value / (nT + 1.0));
  res.trace = res.rho.trace();
  return res;
}

}  // namespace sqw
