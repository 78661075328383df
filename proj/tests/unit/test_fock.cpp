#include <unsupported/Eigen/MatrixFunctions>
#include <random>

#include "doctest.h"
#include "sqw/bath.hpp"
#include "sqw/errors.hpp"
#include "sqw/fock.hpp"

using namespace sqw;
using doctest::Approx;

namespace {

const BathParams kBath{0.1, 0.5, {0.3, 0.2}, 1.0};

// Master equation assembled from dense truncated-operator products.
Matrix reference_rhs(const Matrix& rho, double t, const BathParams& b, double f, Frame frame) {
  const int N = static_cast<int>(rho.rows());
  const Ladder l = ladder_operators(N);
  const Matrix& a = l.lower;
  const Matrix& ad = l.raise;
  cplx m = b.kappa * b.M;
  Matrix H = b.Omega * ad * a + f * (a + ad);
  if (frame == Frame::rotating) {
    m *= std::polar(1.0, 2.0 * b.Omega * t);
    H = f * (std::polar(1.0, -b.Omega * t) * a + std::polar(1.0, b.Omega * t) * ad);
  }
  auto diss = [&](const Matrix& L, const Matrix& K) { return 2.0 * L * rho * K - K * L * rho - rho * K * L; };
  return -kI * (H * rho - rho * H) + b.kappa * (b.nbar + 1.0) * diss(a, ad) + b.kappa * b.nbar * diss(ad, a) +
         m * diss(ad, ad) + std::conj(m) * diss(a, a);
}

Matrix random_density(int N, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Matrix g(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) g(i, j) = {nd(rng), nd(rng)};
  Matrix r = g * g.adjoint();
  return r / r.trace();
}

}  // namespace

TEST_CASE("ladder operators") {
  const Ladder two = ladder_operators(2);
  CHECK(two.lower(0, 1) == cplx{1.0});
  CHECK(two.lower.cwiseAbs().sum() == 1.0);

  const int N = 6;
  const Ladder l = ladder_operators(N);
  const Matrix comm = l.lower * l.raise - l.raise * l.lower;
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      const double want = i != j ? 0.0 : (i == N - 1 ? -(N - 1.0) : 1.0);
      CHECK(std::abs(comm(i, j) - want) < 1e-14);
    }
  }
  const Matrix num = l.raise * l.lower;
  for (int i = 0; i < N; ++i) CHECK(num(i, i).real() == Approx(i));
}

TEST_CASE("states") {
  const FockDensityMatrix c = coherent_state({1.0, 0.5}, 40);
  CHECK(std::abs(c.trace() - 1.0) < 1e-14);
  CHECK(std::abs(moments(c, 0, 1) - cplx{1.0, 0.5}) < 1e-12);
  CHECK(std::abs(moments(c, 0, 0) - 1.0) < 1e-14);

  // truncated geometric distribution
  const int N = 60;
  const double nb = 0.7;
  const FockDensityMatrix th = thermal_state(nb, N);
  double z = 0.0, s = 0.0, q = nb / (nb + 1.0);
  for (int n = 0; n < N; ++n) {
    z += std::pow(q, n);
    s += n * std::pow(q, n);
  }
  CHECK(moments(th, 1, 1).real() == Approx(s / z).epsilon(1e-13));
  CHECK(moments(th, 1, 1).real() == Approx(nb).epsilon(1e-8));

  CHECK(fock_state(3, 5).entries(3, 3) == cplx{1.0});
  CHECK_THROWS_AS(fock_state(5, 5), ConfigError);
}

TEST_CASE("exact displacement agrees with the truncated exponential away from the cutoff") {
  const int N = 40;
  for (cplx b : {cplx{0.3, -0.2}, cplx{1.1, 0.7}}) {
    const Ladder l = ladder_operators(N);
    const Matrix e = (b * l.raise - std::conj(b) * l.lower).exp();
    CHECK((displacement(b, N) - e).topLeftCorner(20, 20).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((displacement_truncated(b, N) - e).cwiseAbs().maxCoeff() < 1e-14);
  }
  // large argument stays finite
  const Matrix big = displacement({9.0, 4.0}, 200);
  CHECK(big.allFinite());
  CHECK(std::abs(big.col(0).squaredNorm() - 1.0) < 1e-8);
}

TEST_CASE("master equation right-hand side") {
  const Matrix vac = fock_state(0, 8).entries;
  CHECK(lindblad_rhs(vac, 0.0, {0.2, 0.0, 0.0, 1.0}, NoDrive{}).cwiseAbs().maxCoeff() == 0.0);

  for (Frame fr : {Frame::lab, Frame::rotating}) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const Matrix rho = random_density(9, seed);
      const double t = 0.37 * seed;
      const Matrix got = lindblad_rhs(rho, t, kBath, ConstantDrive{0.3}, fr);
      CHECK((got - reference_rhs(rho, t, kBath, 0.3, fr)).cwiseAbs().maxCoeff() < 1e-13);
      CHECK(std::abs(got.trace()) < 1e-12);
    }
  }

  // N = 2, rho = |1><1|, no drive, M = 0: d rho11 = -2 kappa (nbar + 1), d rho00 = +2 kappa (nbar + 1)
  const BathParams b{0.3, 0.4, 0.0, 1.0};
  Matrix one = Matrix::Zero(2, 2);
  one(1, 1) = 1.0;
  const Matrix d = lindblad_rhs(one, 0.0, b, NoDrive{});
  CHECK(d(1, 1).real() == Approx(-2.0 * 0.3 * 1.4));
  CHECK(d(0, 0).real() == Approx(2.0 * 0.3 * 1.4));
  CHECK(std::abs(d(0, 1)) == 0.0);
}

TEST_CASE("rotating frame is the conjugated lab frame") {
  // d/dt (R rho R^dag) with R = exp(i Omega t a^dag a)
  const int N = 8;
  const Matrix rho = random_density(N, 11);
  const double t = 0.8;
  const Ladder l = ladder_operators(N);
  const Matrix num = l.raise * l.lower;
  const FockDensityMatrix rot = rotate_frame(FockDensityMatrix(rho), kBath.Omega, t, Rotation::to_rotating);
  const Matrix lab_rhs = lindblad_rhs(rho, t, kBath, ConstantDrive{0.2}, Frame::lab);
  const Matrix conj_rhs = rotate_frame(FockDensityMatrix(lab_rhs), kBath.Omega, t, Rotation::to_rotating).entries;
  const Matrix want = conj_rhs + kI * kBath.Omega * (num * rot.entries - rot.entries * num);
  CHECK((lindblad_rhs(rot.entries, t, kBath, ConstantDrive{0.2}, Frame::rotating) - want).cwiseAbs().maxCoeff() <
        1e-13);
}

TEST_CASE("frame rotation") {
  const FockDensityMatrix rho(random_density(7, 5));
  CHECK((rotate_frame(rho, 1.0, 0.0, Rotation::to_lab).entries - rho.entries).norm() == 0.0);
  const FockDensityMatrix th = thermal_state(0.3, 7);
  CHECK((rotate_frame(th, 1.0, 2.0, Rotation::to_lab).entries - th.entries).norm() == 0.0);
  const auto there = rotate_frame(rho, 1.3, 0.9, Rotation::to_rotating);
  CHECK((rotate_frame(there, 1.3, 0.9, Rotation::to_lab).entries - rho.entries).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("integrator") {
  const FockDensityMatrix c = coherent_state({1.0, 0.5}, 30);
  IntegratorConfig cfg;
  cfg.t_end = 2.0;
  cfg.record_times = {0.0, 0.5, 1.25, 2.0};
  const BathParams pure{0.1, 0.0, 0.0, 1.0};
  const auto traj = integrate(c, pure, NoDrive{}, cfg);
  REQUIRE(traj.size() == 4);
  CHECK((traj[0].rho.entries - c.entries).norm() == 0.0);
  const double n0 = moments(c, 1, 1).real();
  for (const auto& p : traj) {
    CHECK(p.t == cfg.record_times[&p - traj.data()]);
    CHECK(moments(p.rho, 1, 1).real() == Approx(n0 * std::exp(-0.2 * p.t)).epsilon(1e-6));
    CHECK(p.monitors.trace_drift < 1e-10);
    CHECK(p.monitors.herm_drift < 1e-12);
    CHECK(p.monitors.min_eig > -1e-8);
    CHECK_FALSE(p.monitors.truncation_warning);
  }

  // vacuum stays put
  const auto still = integrate(fock_state(0, 10), pure, NoDrive{}, cfg);
  CHECK((still.back().rho.entries - fock_state(0, 10).entries).norm() == 0.0);

  // cutoff too small for the state
  const auto tight = integrate(coherent_state({2.0, 0.0}, 8), pure, NoDrive{}, cfg);
  CHECK(tight.back().monitors.truncation_warning);

  const OrderCheck oc = rk4_order_check(c, kBath, CosineDrive{0.2, 1.0, 0.0}, 1.0, 0.04);
  CHECK(oc.ratio == Approx(16.0).epsilon(0.2));

  IntegratorConfig bad = cfg;
  bad.dt = 0.0;
  CHECK_THROWS_AS(integrate(c, pure, NoDrive{}, bad), ConfigError);
  IntegratorConfig huge = cfg;
  huge.dt = 50.0;
  huge.t_end = 500.0;
  huge.record_times = {};
  CHECK_THROWS_AS(integrate(c, {5.0, 3.0, 0.0, 40.0}, ConstantDrive{10.0}, huge), BlowUp);
}

TEST_CASE("Wigner function") {
  const FockDensityMatrix vac = fock_state(0, 20);
  CHECK(wigner_point(vac, {0.0, 0.0}) == Approx(2.0).epsilon(1e-14));
  CHECK(wigner_point(vac, std::polar(1.0, 0.7)) == Approx(2.0 * std::exp(-2.0)).epsilon(1e-13));
  CHECK(wigner_point(fock_state(1, 20), {0.0, 0.0}) == Approx(-2.0).epsilon(1e-14));
  CHECK(wigner_point(fock_state(1, 3), {0.0, 0.0}) == Approx(-2.0).epsilon(1e-14));

  const GridSpec spec = GridSpec::square(128, 4.0);
  CHECK(std::abs(grid_integral(wigner_grid(vac, spec)) - 1.0) < 1e-3);

  const cplx a0 = std::polar(1.0, 0.3);
  const PhaseSpaceGrid w = wigner_grid(coherent_state(a0, 40), spec);
  double worst = 0.0;
  for (int iy = 0; iy < spec.ny; ++iy)
    for (int ix = 0; ix < spec.nx; ++ix)
      worst = std::max(worst, std::abs(w.at(ix, iy) - 2.0 * std::exp(-2.0 * std::norm(spec.point(ix, iy).value() - a0))));
  CHECK(worst <= 1e-6);
  CHECK(max_abs_imag(wigner_grid(FockDensityMatrix(random_density(10, 4)), GridSpec::square(32, 2.0))) < 1e-10);
  CHECK(wigner_reliable({1.0, 1.0}, 16));
  CHECK_FALSE(wigner_reliable({3.0, 0.0}, 16));
}

TEST_CASE("trace distance") {
  Matrix a = Matrix::Zero(2, 2), b = Matrix::Zero(2, 2);
  a(0, 0) = 1.0;
  b(1, 1) = 1.0;
  CHECK(trace_distance(a, b) == Approx(1.0));
  CHECK(trace_distance(a, a) == 0.0);
}

TEST_CASE("operator series") {
  const FockDensityMatrix rho0 = thermal_state(0.2, 30);
  const BathParams b{0.1, 0.3, 0.2, 1.0};
  const SeriesResult at0 = series_propagate(rho0, b, NoDrive{}, 0.0);
  CHECK((at0.rho.entries - rho0.entries).cwiseAbs().maxCoeff() < 1e-15);

  const SeriesResult vac = series_propagate(fock_state(0, 12), {0.1, 0.0, 0.0, 1.0}, NoDrive{}, 3.0);
  CHECK((vac.rho.entries - fock_state(0, 12).entries).cwiseAbs().maxCoeff() < 1e-15);

  const FockDensityMatrix c = coherent_state({0.8, -0.3}, 30);
  IntegratorConfig cfg;
  cfg.t_end = 0.5;
  const DriveSpec drive = ConstantDrive{0.15};
  const auto ode = integrate(c, b, drive, cfg);
  const SeriesResult s = series_propagate(c, b, drive, 0.5);
  CHECK(trace_distance(s.rho.entries, ode.back().rho.entries) <= 1e-4);
  CHECK(std::abs(s.trace - 1.0) <= 1e-4);

  SeriesTruncation tiny;
  tiny.pq_max = 1;
  CHECK_THROWS_AS(series_propagate(c, {0.5, 2.0, 0.0, 1.0}, NoDrive{}, 3.0, tiny), NonConvergence);
}
