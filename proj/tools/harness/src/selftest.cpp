#include <cmath>
#include <functional>
#include <iomanip>
#include <ostream>
#include <random>

#include "sqw/errors.hpp"
#include "sqw/harness/runners.hpp"
#include "sqw/quasidist.hpp"

namespace sqw::harness {

namespace {

struct Check {
  std::string name;
  double limit;
  bool ratio;  // value must lie within limit of 16 relative, not below limit
  std::function<double()> run;
};

const BathParams kSqueezedBath{0.1, 0.5, {0.3, 0.2}, 1.0};

double check_kernel_consistency() {
  const GridSpec spec = GridSpec::square(64, 4.0);
  double worst = 0.0;
  for (double t : {0.2, 1.0, 3.0}) worst = std::max(worst, kernel_consistency(kSqueezedBath, t, spec));
  return worst;
}

double check_group_law() {
  const OrderingVector r{{0.1, 0.05}, {0.0, 0.2}, 1.0};
  const OrderingVector s{{0.0, 0.3}, {0.1, -0.1}, 0.8};
  const GridSpec spec = GridSpec::square(129, 6.0);
  const auto gr = sample(spec, [&](ComplexPoint a) { return eval_kernel(r, a); });
  const auto gs = sample(spec, [&](ComplexPoint a) { return eval_kernel(s, a); });
  const PhaseSpaceGrid conv = convolve_same(gr, gs);
  const auto want = sample(spec, [&](ComplexPoint a) { return eval_kernel(r + s, a); });
  return linf_distance(conv, want);
}

// 1 - T composes multiplicatively in time; A (nbar T + 1) e^{kappa t} = 1.
double check_coefficient_identities() {
  double worst = 0.0;
  for (double t1 : {0.3, 1.1}) {
    for (double t2 : {0.2, 2.0}) {
      const double lhs = 1.0 - coeff_T(kSqueezedBath, t1 + t2);
      const double rhs = (1.0 - coeff_T(kSqueezedBath, t1)) * (1.0 - coeff_T(kSqueezedBath, t2));
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    const double a = coeff_A(kSqueezedBath, t1) * (kSqueezedBath.nbar * coeff_T(kSqueezedBath, t1) + 1.0) *
                     std::exp(kSqueezedBath.kappa * t1);
    worst = std::max(worst, std::abs(a - 1.0));
  }
  return worst;
}

double check_rk4_order() {
  const BathParams bath{0.1, 0.5, {0.4, 0.0}, 1.0};
  const DriveSpec drive = CosineDrive{0.2, 1.0, 0.0};
  return rk4_order_check(coherent_state({1.0, 0.5}, 24), bath, drive, 1.0, 0.04).ratio;
}

double check_ordering_rule() {
  const OrderingVector r{0.0, 0.0, 1.0};
  const std::vector<ComplexPoint> pts{{0.0, 0.0}, {0.5, 0.2}, {-0.7, 0.4}, {1.0, -1.0}, {0.3, 1.2}};
  double worst = 0.0;
  for (int m = 0; m <= 2; ++m) {
    for (int n = 0; m + n <= 2; ++n) {
      const OrderedProductSpec ps{m, n, r};
      worst = std::max(worst, verify_ordered_product(ps, ordered_product(ps, 16), 16, pts));
    }
  }
  return worst;
}

double check_rhs_trace(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  const int N = 10;
  Matrix g(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) g(i, j) = {nd(rng), nd(rng)};
  Matrix rho = g * g.adjoint();
  rho /= rho.trace();
  const DriveSpec drive = ConstantDrive{0.3};
  double worst = 0.0;
  for (Frame f : {Frame::lab, Frame::rotating})
    worst = std::max(worst, std::abs(lindblad_rhs(rho, 0.7, kSqueezedBath, drive, f).trace()));
  return worst;
}

double check_coherent_wigner() {
  const cplx a0{0.8, -0.3};
  const FockDensityMatrix rho = coherent_state(a0, 40);
  double worst = 0.0;
  for (cplx a : {cplx{0.0, 0.0}, cplx{0.8, -0.3}, cplx{1.5, 0.5}, cplx{-0.5, 1.0}}) {
    const double want = 2.0 * std::exp(-2.0 * std::norm(a - a0));
    worst = std::max(worst, std::abs(wigner_point(rho, a) - want));
  }
  return worst;
}

}  // namespace

int run_selftest(std::ostream& out, const std::string& corrupt) {
  const std::uint64_t seed = seed_from_env();
  const std::vector<Check> checks{
      {"kernel_consistency", 1e-12, false, check_kernel_consistency},
      {"group_law", 5e-4, false, check_group_law},
      {"coefficient_identities", 1e-13, false, check_coefficient_identities},
      {"rk4_order", 0.2, true, check_rk4_order},
      {"ordering_rule", 1e-3, false, check_ordering_rule},
      {"rhs_trace", 1e-12, false, [seed] { return check_rhs_trace(seed); }},
      {"coherent_wigner", 1e-10, false, check_coherent_wigner},
  };
  bool known = corrupt.empty();
  for (const auto& c : checks) known = known || c.name == corrupt;
  if (!known) {
    out << "selftest: unknown check '" << corrupt << "'\n";
    return kConfigFailure;
  }

  bool all = true;
  out << std::left << std::setw(24) << "check" << std::setw(14) << "value" << std::setw(12) << "limit"
      << "result\n";
  for (const auto& c : checks) {
    double v = 0.0;
    bool ok = false;
    try {
      v = c.run();
      if (c.name == corrupt) v = c.ratio ? v * 2.0 : v + 1.0;
      ok = c.ratio ? std::abs(v / 16.0 - 1.0) <= c.limit : v <= c.limit;
    } catch (const std::exception& e) {
      out << c.name << ": " << e.what() << '\n';
    }
    all = all && ok;
    out << std::left << std::setw(24) << c.name << std::setw(14) << std::setprecision(4) << v << std::setw(12)
        << (c.ratio ? "16 +- 20%" : (std::ostringstream() << c.limit).str()) << (ok ? "PASS" : "FAIL") << '\n';
  }
  out << "seed 0x" << std::hex << seed << std::dec << '\n';
  return all ? kOk : kNumericalFailure;
}

}  // namespace sqw::harness
