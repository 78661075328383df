#include "doctest.h"
#include "sqw/errors.hpp"
#include "sqw/fock.hpp"
#include "sqw/quasidist.hpp"

using namespace sqw;
using doctest::Approx;

TEST_CASE("displaced parity") {
  const int N = 12;
  const Matrix t0 = transition_T0({0.0, 0.0}, N);
  for (int i = 0; i < N; ++i) CHECK(t0(i, i) == cplx{i % 2 == 0 ? 2.0 : -2.0});
  CHECK(t0.cwiseAbs().sum() == Approx(2.0 * N));

  const FockDensityMatrix vac = fock_state(0, N);
  for (cplx a : {cplx{0.2, 0.3}, cplx{-0.9, 0.4}}) {
    const Matrix t = transition_T0(a, N);
    CHECK((t - t.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(std::abs((t * vac.entries).trace() - 2.0 * std::exp(-2.0 * std::norm(a))) < 1e-14);
  }
}

TEST_CASE("smoothed transition operators") {
  const int N = 16;
  const cplx a{0.3, -0.4};
  const Matrix t0 = transition_T0(a, N);
  // T_r - T0 is first order in r3; the second-derivative factor grows with
  // the Fock index, so check the rate rather than a fixed bound.
  const double d1 = (transition_Tr(a, {0.0, 0.0, 1e-3}, N) - t0).topLeftCorner(8, 8).cwiseAbs().maxCoeff();
  const double d2 = (transition_Tr(a, {0.0, 0.0, 5e-4}, N) - t0).topLeftCorner(8, 8).cwiseAbs().maxCoeff();
  CHECK(d1 / d2 == Approx(2.0).epsilon(0.1));
  CHECK(d1 < 2e-2);

  const cplx a0{0.5, 0.2};
  const FockDensityMatrix c = coherent_state(a0, 30);
  const Matrix tr = transition_Tr(a, {0.0, 0.0, 1.0}, 30);
  CHECK(std::abs((tr * c.entries).trace() - std::exp(-std::norm(a - a0))) < 1e-8);

  // Trace of the displaced parity is 1 in the untruncated space. The
  // truncated sum alternates, so compare on a wide cutoff near the origin.
  for (const OrderingVector& r : {OrderingVector{0.0, 0.0, 1.0}, OrderingVector{0.4 * kI, 0.4 * kI, 1.0}})
    CHECK(std::abs(transition_Tr({0.1, 0.2}, r, 60).trace() - 1.0) < 1e-6);
  CHECK_THROWS_AS(transition_Tr(a, {0.0, 0.0, -1.0}, N), DivergentKernel);
}

TEST_CASE("quasi-distributions") {
  const GridSpec spec = GridSpec::square(128, 5.0);
  const cplx a0{0.7, -0.4};
  const FockDensityMatrix c = coherent_state(a0, 40);

  CHECK(linf_distance(quasi_distribution(c, {}, spec), wigner_grid(c, spec)) < 1e-13);

  const PhaseSpaceGrid q = quasi_distribution(c, {0.0, 0.0, 1.0}, spec);
  double worst = 0.0;
  for (int iy = 0; iy < spec.ny; ++iy)
    for (int ix = 0; ix < spec.nx; ++ix)
      worst = std::max(worst, std::abs(q.at(ix, iy) - std::exp(-std::norm(spec.point(ix, iy).value() - a0))));
  CHECK(worst < 1e-8);
  CHECK(std::abs(grid_integral(q) - 1.0) < 1e-4);
  CHECK(quasi_distribution_spot_check(q, c, {0.0, 0.0, 1.0}) < 1e-8);

  const FockDensityMatrix th = thermal_state(0.4, 12);
  const OrderingVector r{0.2 * kI, 0.1 * kI, 0.8};
  const PhaseSpaceGrid g = quasi_distribution(th, r, spec);
  CHECK(std::abs(grid_integral(g) - 1.0) < 1e-4);
  CHECK(quasi_distribution_spot_check(g, th, r) < 1e-6);
}

TEST_CASE("reconstruction") {
  const GridSpec spec = GridSpec::square(128, 5.0);
  const FockDensityMatrix vac = fock_state(0, 8);
  const FockDensityMatrix back = reconstruct_rho(wigner_grid(vac, spec), {}, 8);
  CHECK((back.entries - vac.entries).norm() <= 1e-4);

  const GridSpec wide = GridSpec::square(160, 6.0);
  const FockDensityMatrix th = thermal_state(0.4, 12);
  const OrderingVector r{0.0, 0.0, 0.5};
  const FockDensityMatrix rt = reconstruct_rho(quasi_distribution(th, r, wide), r, 12);
  CHECK((rt.entries - th.entries).norm() <= 1e-3);
  CHECK(std::abs(rt.trace() - 1.0) <= 1e-3);

  // Gaussian phase functions map to density matrices
  GaussianPhaseFunction w;
  w.mean = {0.5, 0.3};
  const FockDensityMatrix c = density_from_phase_function(w, 30);
  CHECK((c.entries - coherent_state({0.5, 0.3}, 30).entries).cwiseAbs().maxCoeff() < 1e-12);
  GaussianPhaseFunction bad;
  bad.ordering = {0.0, 0.0, -0.5};  // growing kernel
  CHECK_THROWS_AS(density_from_phase_function(bad, 20), TailDivergence);
}

TEST_CASE("completeness") {
  const GridSpec spec = GridSpec::square(128, 5.0);
  for (const OrderingVector& r : {OrderingVector{}, OrderingVector{0.0, 0.0, 1.0}}) {
    const CompletenessReport rep = completeness_check(r, 16, spec);
    CHECK(rep.block_deviation <= 1e-3);
    CHECK(rep.deviation_by_block.size() == 16);
    CHECK(rep.deviation_by_block.back() >= rep.deviation_by_block[7]);
  }
}

TEST_CASE("ordered products") {
  const int N = 16;
  const Ladder l = ladder_operators(N);
  const std::vector<OrderingVector> rs{{}, {0.0, 0.0, 1.0}, {0.4 * kI, 0.4 * kI, 1.0}};
  for (const auto& r : rs) {
    const Matrix id = ordered_product({0, 0, r}, N);
    CHECK((id - Matrix::Identity(N, N)).topLeftCorner(8, 8).cwiseAbs().maxCoeff() < 1e-4);
    const Matrix low = ordered_product({0, 1, r}, N);
    CHECK((low - l.lower).topLeftCorner(8, 8).cwiseAbs().maxCoeff() < 1e-4);
  }
  // Weyl-symmetric number operator
  const Matrix sym = 0.5 * (l.raise * l.lower + l.lower * l.raise);
  const Matrix n11 = ordered_product({1, 1, {}}, N);
  CHECK((n11 - sym).topLeftCorner(8, 8).cwiseAbs().maxCoeff() < 1e-4);

  // T at r = (0,0,1) is the coherent projector, so the product is a^dag a.
  const Matrix normal = ordered_product({1, 1, {0.0, 0.0, 1.0}}, N);
  CHECK((normal - l.raise * l.lower).topLeftCorner(8, 8).cwiseAbs().maxCoeff() < 1e-4);

  const std::vector<ComplexPoint> pts{{0.0, 0.0}, {0.5, 0.2}, {-0.7, 0.4}};
  CHECK(verify_ordered_product({1, 1, rs[1]}, normal, N, pts) < 1e-3);
  CHECK_THROWS_AS(ordered_product({3, 2, rs[1]}, N), ConfigError);
}
