#include <random>

#include "doctest.h"
#include "sqw/errors.hpp"
#include "sqw/gaussian_integral.hpp"
#include "sqw/kernel.hpp"
#include "support.hpp"

using namespace sqw;
using doctest::Approx;

TEST_CASE("quadratic norm") {
  CHECK(quadratic_norm({0.0, 0.0, 1.0}) == cplx{1.0});
  CHECK(quadratic_norm({0.0, 0.0, 2.0}) == cplx{4.0});
  const double a = 0.3, b = -0.7, c = 2.5;
  const cplx rr = quadratic_norm({4.0 * kI * b, 4.0 * kI * a, c});
  CHECK(rr.real() == Approx(c * c - 16.0 * (a * a + b * b)).epsilon(1e-14));
  CHECK(std::abs(rr.imag()) < 1e-15);
}

TEST_CASE("kernel point values") {
  const OrderingVector w{0.0, 0.0, 1.0};
  CHECK(eval_kernel(w, {0.0, 0.0}).real() == Approx(2.0));
  CHECK(eval_kernel(w, std::polar(1.0, 0.4)).real() == Approx(2.0 * std::exp(-2.0)).epsilon(1e-14));
  CHECK(eval_kernel({0.0, 0.0, 2.0}, std::polar(1.0, -1.1)).real() == Approx(std::exp(-1.0)).epsilon(1e-14));

  const OrderingVector r{{0.2, 0.1}, {-0.1, 0.3}, {1.4, 0.05}};
  for (cplx a : {cplx{0.3, 0.2}, cplx{-1.0, 0.7}, cplx{2.0, -0.4}})
    CHECK(std::abs(eval_kernel(r, a) - eval_kernel(r, -a)) < 1e-15);

  CHECK_THROWS_AS(eval_kernel({0.0, 0.0, 0.0}, {0.1, 0.0}), ZeroQuadraticNorm);
  CHECK_THROWS_AS(eval_kernel({1.0, kI, 0.0}, {0.1, 0.0}), ZeroQuadraticNorm);
}

TEST_CASE("decay classification") {
  CHECK(is_decaying({0.0, 0.0, 1.0}));
  CHECK_FALSE(is_decaying({0.0, 0.0, -1.0}));
  CHECK_FALSE(is_decaying({0.0, 0.0, 0.0}));
  // A strong r1 squeeze turns one axis into a growing direction.
  CHECK_FALSE(is_decaying({2.0 * kI, 0.0, 1.0}));
  const auto [narrow, wide] = kernel_widths({0.0, 0.0, 2.0});
  CHECK(narrow == Approx(wide));
  CHECK(narrow == Approx(std::sqrt(0.5)));
}

TEST_CASE("decaying kernels are normalized and have the stated moments") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  for (int trial = 0; trial < 3; ++trial) {
    const OrderingVector r{{u(rng), u(rng)}, {u(rng), u(rng)}, {1.0 + u(rng), u(rng)}};
    REQUIRE(is_decaying(r));
    const auto g = [&](cplx a) { return eval_kernel(r, a); };
    CHECK(std::abs(test::plane_integral(g) - 1.0) < 1e-9);
    for (auto [j, k] : {std::pair{2, 0}, std::pair{1, 1}, std::pair{0, 2}, std::pair{2, 2}, std::pair{3, 1}}) {
      const cplx want = test::plane_integral([&](cplx b) { return g(b) * std::pow(b, j) * std::pow(std::conj(b), k); });
      CHECK(std::abs(kernel_moment(r, j, k) - want) < 1e-8);
    }
    CHECK(kernel_moment(r, 1, 0) == cplx{0.0});
  }
}

TEST_CASE("kernel transform matches direct quadrature and multiplies under composition") {
  const OrderingVector r{{0.1, 0.2}, {0.0, -0.15}, {0.9, 0.0}};
  const OrderingVector s{{0.0, 0.1}, {0.2, 0.0}, {0.6, 0.1}};
  for (cplx xi : {cplx{0.4, -0.3}, cplx{1.2, 0.5}}) {
    const cplx want = test::plane_integral(
        [&](cplx b) { return eval_kernel(r, b) * std::exp(b * std::conj(xi) - std::conj(b) * xi); });
    CHECK(std::abs(kernel_transform(r, xi) - want) < 1e-9);
    CHECK(std::abs(kernel_transform(r + s, xi) - kernel_transform(r, xi) * kernel_transform(s, xi)) < 1e-14);
  }
}

TEST_CASE("ordering composition") {
  const OrderingVector w{0.0, 0.0, 1.0};
  const OrderingVector two = convolve_orderings(w, w);
  CHECK(two.r3 == cplx{2.0});
  CHECK(two.r1 == cplx{0.0});
  const OrderingVector r{{0.1, 0.2}, {0.3, 0.0}, {1.0, 0.0}};
  const OrderingVector same = convolve_orderings(r, {});
  CHECK(same.r1 == r.r1);
  CHECK(same.r2 == r.r2);
  CHECK(same.r3 == r.r3);
}

TEST_CASE("rotated ordering evaluates the kernel on rotated points") {
  const OrderingVector r{{0.0, 0.3}, {0.0, 0.2}, {1.2, 0.0}};
  for (double th : {0.3, 1.7, -2.2}) {
    const OrderingVector rr = rotate_ordering(r, th);
    for (cplx b : {cplx{0.4, 0.1}, cplx{-0.8, 0.9}})
      CHECK(std::abs(eval_kernel(rr, b) - eval_kernel(r, std::polar(1.0, th) * b)) < 1e-14);
  }
}

TEST_CASE("Gaussian phase function") {
  GaussianPhaseFunction f;
  f.mean = {0.3, -0.2};
  f.ordering = {{0.0, 0.2}, {0.0, 0.1}, 1.3};
  f.weight = 2.0;
  f.scale = 1.5;
  CHECK(std::abs(test::plane_integral([&](cplx a) { return f(a); }) - f.mass()) < 1e-9);
  for (auto [m, n] : {std::pair{0, 1}, std::pair{1, 1}, std::pair{2, 0}, std::pair{1, 2}}) {
    const cplx want = test::plane_integral([&](cplx a) { return f(a) * std::pow(std::conj(a), m) * std::pow(a, n); });
    CHECK(std::abs(phase_function_moment(f, m, n) - want) < 1e-8);
  }
  GaussianPhaseFunction plain;
  plain.mean = {0.0, 0.0};
  for (cplx a : {cplx{0.2, 0.1}, cplx{-1.0, 0.5}}) CHECK(plain(a) == eval_kernel({0.0, 0.0, 1.0}, a));
}

TEST_CASE("normal-ordered moments of a coherent Wigner function") {
  GaussianPhaseFunction w;
  const cplx a0{1.0, 0.5};
  w.mean = a0;
  CHECK(std::abs(normal_ordered_moment(w, 0, 1) - a0) < 1e-14);
  CHECK(std::abs(normal_ordered_moment(w, 1, 1) - std::norm(a0)) < 1e-14);
  CHECK(std::abs(normal_ordered_moment(w, 0, 2) - a0 * a0) < 1e-14);
  CHECK(std::abs(normal_ordered_moment(w, 2, 2) - std::norm(a0) * std::norm(a0)) < 1e-13);
}

TEST_CASE("complex Gaussian integral") {
  CHECK(std::abs(gaussian_integral({}) - 1.0) < 1e-15);
  GaussianIntegralParams p;
  p.varsigma = -2.0;
  CHECK(std::abs(gaussian_integral(p) - 0.5) < 1e-15);

  auto direct = [](const GaussianIntegralParams& q) {
    return test::plane_integral([&](cplx z) {
      const cplx zc = std::conj(z);
      return std::exp(q.varsigma * z * zc + q.xi * z + q.eta * zc + q.f * z * z + q.g * zc * zc);
    });
  };
  GaussianIntegralParams q;
  q.xi = 1.0;
  q.eta = -1.0;
  CHECK(std::abs(gaussian_integral(q) - std::exp(-1.0)) < 1e-14);
  CHECK(std::abs(direct(q) - std::exp(-1.0)) < 1e-9);

  GaussianIntegralParams s{{-1.3, 0.2}, {0.3, 0.1}, {-0.2, 0.4}, {0.2, -0.1}, {0.1, 0.25}};
  REQUIRE(s.converges());
  CHECK(std::abs(gaussian_integral(s) - direct(s)) < 1e-9);

  GaussianIntegralParams bad;
  bad.varsigma = 0.1;
  CHECK_FALSE(bad.converges());
  CHECK_THROWS_AS(gaussian_integral(bad), DivergentIntegral);
}
