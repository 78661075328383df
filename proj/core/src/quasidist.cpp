#include "sqw/quasidist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "displacement.hpp"
#include "parallel.hpp"
#include "sqw/errors.hpp"

namespace sqw {

namespace {

constexpr double kTailRatio = 1e-10;
constexpr double kNoiseFloorRatio = 1e-6;

// Trapezoid spacing that resolves T0 matrix elements up to level N.
double operator_spacing(int N) { return 0.5 * kPi / (std::sqrt(2.0 * N) + 6.0); }

// acc += weight * T0(alpha)
void add_T0(ComplexPoint alpha, int N, cplx weight, Matrix& acc) {
  detail::visit_displacement(2.0 * alpha.value(), N,
                             [&](int m, int n, cplx v) { acc(m, n) += weight * (n % 2 == 0 ? 2.0 : -2.0) * v; });
}

// Sum over a square node set of w(c) T0(c); rows are reduced in order so the
// result does not depend on the thread count.
template <class W>
Matrix sum_T0(int n, double h, int N, W&& weight) {
  std::vector<Matrix> rows(n, Matrix::Zero(N, N));
  const double half = 0.5 * (n - 1) * h;
  detail::parallel_for(n, [&](int iy) {
    const double y = -half + iy * h;
    for (int ix = 0; ix < n; ++ix) {
      const ComplexPoint c{-half + ix * h, y};
      const cplx w = weight(c);
      if (w != 0.0) add_T0(c, N, w, rows[iy]);
    }
  });
  Matrix out = Matrix::Zero(N, N);
  for (const auto& r : rows) out += r;
  return out;
}

double max_abs_T0(ComplexPoint c, int N) {
  double m = 0.0;
  detail::visit_displacement(2.0 * c.value(), N, [&](int, int, cplx v) { m = std::max(m, std::abs(v)); });
  return 2.0 * m;
}

cplx ipow(cplx z, int k) {
  cplx out{1.0};
  for (int i = 0; i < k; ++i) out *= z;
  return out;
}

double binomial(int n, int k) {
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

}  // namespace

Matrix transition_T0(ComplexPoint alpha, int N) {
  if (N < 2) throw ConfigError("transition_T0: N must be >= 2");
  Matrix t = Matrix::Zero(N, N);
  add_T0(alpha, N, 1.0, t);
  return t;
}

Matrix transition_Tr(ComplexPoint alpha, const OrderingVector& r, int N) {
  if (N < 2) throw ConfigError("transition_Tr: N must be >= 2");
  if (r.is_zero()) return transition_T0(alpha, N);
  if (!is_decaying(r)) throw DivergentKernel("transition_Tr: ordering vector does not give a decaying kernel");
  const auto w = kernel_widths(r);
  const double h = std::min(0.25 * w[0], operator_spacing(N));
  const int half_n = static_cast<int>(std::ceil(7.0 * w[1] / h));
  const int n = 2 * half_n + 1;
  const double meas = h * h / kPi;
  const cplx a = alpha.value();
  Matrix out = Matrix::Zero(N, N);
  std::vector<Matrix> rows(n, Matrix::Zero(N, N));
  detail::parallel_for(n, [&](int iy) {
    const double by = (iy - half_n) * h;
    for (int ix = 0; ix < n; ++ix) {
      const ComplexPoint b{(ix - half_n) * h, by};
      const cplx g = eval_kernel(r, b);
      if (std::abs(g) < 1e-300) continue;
      add_T0(a - b.value(), N, meas * g, rows[iy]);
    }
  });
  for (const auto& m : rows) out += m;
  return out;
}

PhaseSpaceGrid quasi_distribution(const FockDensityMatrix& rho, const OrderingVector& r, const GridSpec& spec) {
  PhaseSpaceGrid w0 = wigner_grid(rho, spec);
  if (r.is_zero()) return w0;
  const double d = std::max(spec.dx, spec.dy);
  if (is_decaying(r) && kernel_widths(r)[0] >= 1.5 * d) {
    const double wide = kernel_widths(r)[1];
    const int hx = static_cast<int>(std::ceil(8.0 * wide / spec.dx));
    const int hy = static_cast<int>(std::ceil(8.0 * wide / spec.dy));
    const GridSpec ks{2 * hx + 1, 2 * hy + 1, {}, spec.dx, spec.dy};
    const PhaseSpaceGrid k = sample(ks, [&](ComplexPoint b) { return eval_kernel(r, b); });
    return convolve_same(w0, k);
  }
  return convolve_with_ordering(w0, r);
}

double quasi_distribution_spot_check(const PhaseSpaceGrid& w, const FockDensityMatrix& rho, const OrderingVector& r,
                                     int points) {
  const GridSpec& s = w.spec;
  const int cx = s.nx / 2;
  const int cy = s.ny / 2;
  const int step = std::max(1, static_cast<int>(std::lround(0.5 / s.dx)));
  const int offs[][2] = {{0, 0}, {step, 0}, {0, step}, {-step, -step}, {2 * step, -step}, {-2 * step, step}};
  double worst = 0.0;
  for (int i = 0; i < points && i < 6; ++i) {
    const int ix = std::clamp(cx + offs[i][0], 0, s.nx - 1);
    const int iy = std::clamp(cy + offs[i][1], 0, s.ny - 1);
    const Matrix t = transition_Tr(s.point(ix, iy), r, rho.dim());
    const cplx direct = (t * rho.entries).trace();
    worst = std::max(worst, std::abs(direct - w.at(ix, iy)));
  }
  return worst;
}

FockDensityMatrix reconstruct_rho(const PhaseSpaceGrid& w, const OrderingVector& r, int N) {
  if (N < 1) throw ConfigError("reconstruct_rho: N must be positive");
  const GridSpec& s = w.spec;
  const double meas = s.cell_measure();
  const double extent = std::max({std::abs(s.x(0)), std::abs(s.x(s.nx - 1)), std::abs(s.y(0)), std::abs(s.y(s.ny - 1))});
  const double nyquist = 0.5 * kPi / std::max(s.dx, s.dy);

  // chi_r(b) = sum_a meas W(a) exp(2i (x b_y - y b_x))
  auto chi_at = [&](cplx b) {
    cplx sum{0.0};
    for (int iy = 0; iy < s.ny; ++iy) {
      const double y = s.y(iy);
      cplx row{0.0};
      for (int ix = 0; ix < s.nx; ++ix) row += w.at(ix, iy) * std::polar(1.0, 2.0 * (s.x(ix) * b.imag() - y * b.real()));
      sum += row;
    }
    return meas * sum;
  };
  auto integrand = [&](cplx b) { return std::abs(kernel_transform(-r, b) * chi_at(b)); };

  // Radial tail probe. K_{-r} grows, so past some radius the sampled chi_r is
  // round-off times an exponential; if the integrand bottoms out there, cut at
  // the minimum as long as it is already far below the peak.
  const double peak = std::max(integrand(0.0), 1e-300);
  double radius = -1.0;
  double best = std::numeric_limits<double>::infinity();
  double best_R = -1.0;
  for (double R = 1.0; R <= nyquist; R += 0.5) {
    double ring = 0.0;
    for (int k = 0; k < 16; ++k) ring = std::max(ring, integrand(std::polar(R, 2.0 * kPi * k / 16.0)));
    if (ring < kTailRatio * peak) {
      radius = R + 0.5;
      break;
    }
    if (ring < best) {
      best = ring;
      best_R = R;
    } else if (best < kNoiseFloorRatio * peak && ring > 10.0 * best) {
      radius = best_R;
      break;
    }
  }
  if (radius < 0.0 || radius > nyquist) {
    std::ostringstream os;
    os << "reconstruct_rho: integrand does not decay below " << kTailRatio << " of its peak within |b| <= " << nyquist;
    throw TailDivergence(os.str());
  }

  const double db_target = 0.5 * kPi / (extent + std::sqrt(2.0 * N) + 4.0);
  const int half_n = static_cast<int>(std::ceil(radius / db_target));
  const int n = 2 * half_n + 1;
  const double db = radius / half_n;

  // chi on the b lattice, separably: rows b_x (index j), columns b_y (index l).
  Matrix wm(s.ny, s.nx);
  for (int iy = 0; iy < s.ny; ++iy)
    for (int ix = 0; ix < s.nx; ++ix) wm(iy, ix) = w.at(ix, iy);
  Matrix ey(n, s.ny);
  Matrix ex(n, s.nx);
  for (int j = 0; j < n; ++j) {
    const double b = (j - half_n) * db;
    for (int iy = 0; iy < s.ny; ++iy) ey(j, iy) = std::polar(1.0, -2.0 * s.y(iy) * b);
    for (int ix = 0; ix < s.nx; ++ix) ex(j, ix) = std::polar(1.0, 2.0 * s.x(ix) * b);
  }
  const Matrix chi = meas * (ey * wm * ex.transpose());

  std::vector<Matrix> rows(n, Matrix::Zero(N, N));
  const double bmeas = db * db / kPi;
  detail::parallel_for(n, [&](int j) {
    const double bx = (j - half_n) * db;
    for (int l = 0; l < n; ++l) {
      const cplx b{bx, (l - half_n) * db};
      const cplx c = bmeas * kernel_transform(-r, b) * chi(j, l);
      detail::visit_displacement(-b, N, [&](int m, int k, cplx v) { rows[j](m, k) += c * v; });
    }
  });
  Matrix rho = Matrix::Zero(N, N);
  for (const auto& m : rows) rho += m;
  return FockDensityMatrix(rho);
}

FockDensityMatrix density_from_phase_function(const GaussianPhaseFunction& f, int N) {
  if (N < 1) throw ConfigError("density_from_phase_function: N must be positive");
  const cplx mu = f.mean.value();
  const double c = f.scale;
  auto chi = [&](cplx b) {
    return f.weight / (c * c) * std::exp((b * std::conj(mu) - std::conj(b) * mu) / c) * kernel_transform(f.ordering, b / c);
  };
  const double peak = std::abs(chi(0.0));
  double radius = -1.0;
  for (double R = 1.0; R <= 40.0; R += 0.25) {
    double ring = 0.0;
    for (int k = 0; k < 16; ++k) ring = std::max(ring, std::abs(chi(std::polar(R, 2.0 * kPi * k / 16.0))));
    if (ring < 1e-13 * peak) {
      radius = R;
      break;
    }
  }
  if (radius < 0.0) throw TailDivergence("density_from_phase_function: characteristic function does not decay");
  // D(-b) elements oscillate on the scale 1/sqrt(N); the mean adds a phase of rate 2|mu|/c.
  const double db = 0.5 * kPi / (std::sqrt(2.0 * N) + 2.0 * std::abs(mu) / c + 4.0);
  const int half_n = static_cast<int>(std::ceil(radius / db));
  const double h = radius / half_n;
  const int n = 2 * half_n + 1;
  const double meas = h * h / kPi;
  std::vector<Matrix> rows(n, Matrix::Zero(N, N));
  detail::parallel_for(n, [&](int j) {
    for (int l = 0; l < n; ++l) {
      const cplx b{(j - half_n) * h, (l - half_n) * h};
      const cplx w = meas * chi(b);
      if (std::abs(w) < 1e-300) continue;
      detail::visit_displacement(-b, N, [&](int m, int k, cplx v) { rows[j](m, k) += w * v; });
    }
  });
  Matrix rho = Matrix::Zero(N, N);
  for (const auto& m : rows) rho += m;
  return FockDensityMatrix(rho);
}

CompletenessReport completeness_check(const OrderingVector& r, int N, const GridSpec& spec) {
  if (N < 2) throw ConfigError("completeness_check: N must be >= 2");
  spec.validate();
  // int_box T_r = sum_c T0(c) M(c) with M(c) = sum_{a in box} g_r(a - c) dx dy / pi.
  PhaseSpaceGrid box(spec);
  for (auto& v : box.values) v = 1.0;
  PhaseSpaceGrid weights = box;
  if (!r.is_zero()) {
    if (!is_decaying(r)) throw DivergentKernel("completeness_check: ordering vector does not give a decaying kernel");
    const double wide = kernel_widths(r)[1];
    const int hx = static_cast<int>(std::ceil(8.0 * wide / spec.dx));
    const int hy = static_cast<int>(std::ceil(8.0 * wide / spec.dy));
    const GridSpec ks{2 * hx + 1, 2 * hy + 1, {}, spec.dx, spec.dy};
    const PhaseSpaceGrid k = sample(ks, [&](ComplexPoint b) { return eval_kernel(r, b); });
    weights = convolve_grids(box, k);
  }
  const GridSpec& ws = weights.spec;
  std::vector<Matrix> rows(ws.ny, Matrix::Zero(N, N));
  const double meas = spec.cell_measure();
  detail::parallel_for(ws.ny, [&](int iy) {
    for (int ix = 0; ix < ws.nx; ++ix) {
      const cplx m = weights.at(ix, iy);
      if (std::abs(m) < 1e-18) continue;
      add_T0(ws.point(ix, iy), N, meas * m, rows[iy]);
    }
  });
  CompletenessReport rep;
  rep.integral = Matrix::Zero(N, N);
  for (const auto& m : rows) rep.integral += m;
  const Matrix dev = rep.integral - Matrix::Identity(N, N);
  for (int k = 1; k <= N; ++k) {
    Eigen::JacobiSVD<Matrix> svd(dev.topLeftCorner(k, k));
    rep.deviation_by_block.push_back(svd.singularValues()(0));
  }
  rep.block_deviation = rep.deviation_by_block[N / 2 - 1];
  return rep;
}

Matrix ordered_product(const OrderedProductSpec& spec, int N) {
  if (spec.m < 0 || spec.n < 0 || spec.m + spec.n > 4) throw ConfigError("ordered_product: need m, n >= 0, m + n <= 4");
  if (N < 2) throw ConfigError("ordered_product: N must be >= 2");
  const OrderingVector minus = -spec.ordering;
  // Moments E[b*^i b^j] of g_{-r}, continued analytically.
  std::vector<std::vector<cplx>> mom(spec.m + 1, std::vector<cplx>(spec.n + 1));
  for (int i = 0; i <= spec.m; ++i)
    for (int j = 0; j <= spec.n; ++j) mom[i][j] = kernel_moment(minus, j, i);
  auto poly = [&](cplx c) {
    cplx sum{0.0};
    for (int i = 0; i <= spec.m; ++i)
      for (int j = 0; j <= spec.n; ++j)
        sum += binomial(spec.m, i) * binomial(spec.n, j) * ipow(std::conj(c), spec.m - i) * ipow(c, spec.n - j) *
               mom[i][j];
    return sum;
  };

  auto tail = [&](double R) {
    double ring = 0.0;
    for (int k = 0; k < 32; ++k) {
      const cplx c = std::polar(R, 2.0 * kPi * (k + 0.5) / 32.0);
      ring = std::max(ring, std::abs(poly(c)) * max_abs_T0(c, N));
    }
    return ring;
  };
  double peak = 0.0;
  for (double R = 0.25; R <= 2.0; R += 0.25) peak = std::max(peak, tail(R));
  peak = std::max(peak, 1e-300);
  double radius = -1.0;
  for (double R = 2.0; R <= 20.0; R += 0.25) {
    if (tail(R) < kTailRatio * peak) {
      radius = R;
      break;
    }
  }
  if (radius < 0.0) throw TailDivergence("ordered_product: integrand tail does not decay within |c| <= 20");

  const double h0 = operator_spacing(N);
  const int half_n = static_cast<int>(std::ceil(radius / h0));
  const double h = radius / half_n;
  const double meas = h * h / kPi;
  return sum_T0(2 * half_n + 1, h, N, [&](ComplexPoint c) { return meas * poly(c.value()); });
}

double verify_ordered_product(const OrderedProductSpec& spec, const Matrix& R, int N,
                              const std::vector<ComplexPoint>& points) {
  double worst = 0.0;
  for (const auto& p : points) {
    const Matrix t = transition_Tr(p, spec.ordering, N);
    const cplx lhs = (t * R).trace();
    const cplx a = p.value();
    const cplx rhs = ipow(std::conj(a), spec.m) * ipow(a, spec.n);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

}  // namespace sqw
