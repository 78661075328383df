#include <sstream>

#include "doctest.h"
#include "sqw/errors.hpp"
#include "sqw/grid.hpp"
#include "sqw/io.hpp"

using namespace sqw;
using doctest::Approx;

namespace {

GaussianPhaseFunction gauss(cplx mean, OrderingVector r = {0.0, 0.0, 1.0}, double weight = 1.0) {
  GaussianPhaseFunction f;
  f.mean = mean;
  f.ordering = r;
  f.weight = weight;
  return f;
}

}  // namespace

TEST_CASE("sampled kernels integrate to their mass") {
  const GridSpec spec = GridSpec::square(64, 4.0);
  CHECK(std::abs(grid_integral(sample_function(gauss(0.0), spec)) - 1.0) < 1e-8);
  CHECK(std::abs(grid_integral(sample_function(gauss(0.0, {0.0, 0.0, 1.0}, 2.0), spec)) - 2.0) < 1e-8);
  CHECK(grid_integral(PhaseSpaceGrid(spec)) == cplx{0.0});

  const cplx mu{1.1, -0.6};
  const PhaseSpaceGrid g = sample_function(gauss(mu), spec);
  std::size_t best = 0;
  for (std::size_t i = 1; i < g.values.size(); ++i)
    if (std::abs(g.values[i]) > std::abs(g.values[best])) best = i;
  const ComplexPoint p = spec.point(static_cast<int>(best % spec.nx), static_cast<int>(best / spec.nx));
  CHECK(std::abs(p.re - mu.real()) <= 0.5 * spec.dx + 1e-12);
  CHECK(std::abs(p.im - mu.imag()) <= 0.5 * spec.dy + 1e-12);
}

TEST_CASE("sampling warnings") {
  // Kernel of width ~0.07 on a grid with spacing 0.13.
  const PhaseSpaceGrid g = sample_function(gauss(0.0, {0.0, 0.0, 0.01}), GridSpec::square(64, 4.0));
  CHECK_FALSE(g.warnings.empty());
  const PhaseSpaceGrid wide = sample_function(gauss(0.0, {0.0, 0.0, 4.0}), GridSpec::square(64, 2.0));
  CHECK_FALSE(wide.warnings.empty());
  CHECK(sample_function(gauss(0.0), GridSpec::square(128, 5.0)).warnings.empty());
}

TEST_CASE("convolution with a unit spike translates") {
  const GridSpec bs = GridSpec::square(64, 4.0);
  const GridSpec ks = GridSpec::square(31, 15.0 * bs.dx);
  PhaseSpaceGrid spike(ks);
  const int ix = 20, iy = 9;
  spike.at(ix, iy) = kPi / (ks.dx * ks.dy);
  const PhaseSpaceGrid b = sample_function(gauss({0.2, 0.1}), bs);
  const PhaseSpaceGrid c = convolve_grids(spike, b);
  const cplx shift = ks.point(ix, iy).value();
  double worst = 0.0;
  for (int y = 0; y < c.spec.ny; ++y) {
    for (int x = 0; x < c.spec.nx; ++x) {
      const cplx want = gauss(cplx{0.2, 0.1} + shift)(c.spec.point(x, y));
      worst = std::max(worst, std::abs(c.at(x, y) - want) * (std::abs(c.spec.point(x, y).value() - shift) < 3.5));
    }
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("Gaussian convolution adds orderings") {
  const GridSpec spec = GridSpec::square(129, 6.0);
  const PhaseSpaceGrid a = sample_function(gauss(0.0), spec);
  const PhaseSpaceGrid c = convolve_same(a, a);
  CHECK(linf_distance(c, sample_function(gauss(0.0, {0.0, 0.0, 2.0}), spec)) < 1e-10);

  const OrderingVector r{{0.0, 0.2}, {0.1, 0.0}, 0.9};
  const PhaseSpaceGrid b = sample_function(gauss({0.3, 0.0}, r), spec);
  const PhaseSpaceGrid full = convolve_grids(a, b);
  CHECK(std::abs(grid_integral(full) - grid_integral(a) * grid_integral(b)) < 1e-10);
}

TEST_CASE("spectral convolution with an ordering") {
  const GridSpec spec = GridSpec::square(128, 6.0);
  const OrderingVector s{{0.0, 0.1}, {0.05, 0.1}, 0.5};
  const PhaseSpaceGrid f = sample_function(gauss({0.5, -0.3}), spec);
  const PhaseSpaceGrid out = convolve_with_ordering(f, s);
  CHECK(linf_distance(out, sample_function(gauss({0.5, -0.3}, OrderingVector{0.0, 0.0, 1.0} + s), spec)) < 1e-9);
  CHECK(linf_distance(convolve_with_ordering(f, {}), f) == 0.0);
}

TEST_CASE("bicubic interpolation") {
  const GridSpec spec = GridSpec::square(41, 2.0);
  // Keys interpolation reproduces quadratics exactly.
  auto q = [](ComplexPoint p) { return cplx{1.0 + 0.5 * p.re - p.im * p.im + 0.3 * p.re * p.im, p.re * p.re}; };
  const PhaseSpaceGrid g = sample(spec, q);
  for (ComplexPoint p : {ComplexPoint{0.013, -0.27}, ComplexPoint{-0.81, 0.55}, ComplexPoint{1.2, 1.1}})
    CHECK(std::abs(interpolate_bicubic(g, p) - q(p)) < 1e-12);
  CHECK_THROWS_AS(interpolate_bicubic(g, {2.5, 0.0}), ExtentTooSmall);
}

TEST_CASE("pad and crop") {
  const GridSpec spec = GridSpec::square(16, 2.0, {0.3, 0.1});
  const PhaseSpaceGrid g = sample_function(gauss({0.3, 0.1}), spec);
  const PhaseSpaceGrid p = pad_grid(g, 5);
  CHECK(p.spec.nx == 26);
  CHECK(p.spec.x(5) == Approx(spec.x(0)));
  CHECK(linf_distance(crop(p, 5, 5, 16, 16), g) == 0.0);
}

TEST_CASE("distances") {
  const GridSpec spec = GridSpec::square(32, 3.0);
  const PhaseSpaceGrid a = sample_function(gauss(0.0), spec);
  PhaseSpaceGrid b = a;
  for (auto& v : b.values) v += cplx{0.0, 1e-3};
  CHECK(linf_distance(a, b) == Approx(1e-3));
  CHECK(max_abs_imag(b) == Approx(1e-3));
  CHECK(l2_distance(a, b) == Approx(1e-3 * std::sqrt(32.0 * 32.0 * spec.cell_measure())));
  CHECK_THROWS_AS(linf_distance(a, PhaseSpaceGrid(GridSpec::square(16, 3.0))), MismatchedGrids);
}

TEST_CASE("grid CSV round trip is exact") {
  const GridSpec spec = GridSpec::square(12, 1.7, {0.1, -0.2});
  PhaseSpaceGrid g = sample_function(gauss({0.1, 0.0}, {{0.0, 0.1}, 0.0, 1.0}), spec);
  std::stringstream ss;
  write_grid_csv(ss, g, {{"t", "0.5"}});
  CHECK(ss.str().rfind("# nx=12", 0) == 0);
  const PhaseSpaceGrid back = read_grid_csv(ss);
  CHECK(same_layout(back.spec, g.spec));
  CHECK(linf_distance(back, g) == 0.0);

  Matrix m = Matrix::Random(4, 3);
  std::stringstream ms;
  write_matrix_csv(ms, m, {{"N", "4"}});
  CHECK((read_matrix_csv(ms) - m).norm() == 0.0);
}
