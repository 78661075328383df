#include "sqw/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fft.hpp"
#include "parallel.hpp"
#include "sqw/errors.hpp"

namespace sqw {

namespace {

// Smallest 2^a 3^b 5^c >= n.
int smooth_size(int n) {
  for (int m = std::max(n, 1);; ++m) {
    int k = m;
    for (int p : {2, 3, 5})
      while (k % p == 0) k /= p;
    if (k == 1) return m;
  }
}

double keys(double s) {
  constexpr double a = -0.5;
  s = std::abs(s);
  if (s <= 1.0) return ((a + 2.0) * s - (a + 3.0)) * s * s + 1.0;
  if (s < 2.0) return ((a * s - 5.0 * a) * s + 8.0 * a) * s - 4.0 * a;
  return 0.0;
}

void require_same_spacing(const GridSpec& a, const GridSpec& b, const char* who) {
  const double tol = 1e-12 * std::max(a.dx, a.dy);
  if (std::abs(a.dx - b.dx) > tol || std::abs(a.dy - b.dy) > tol) {
    throw MismatchedGrids(std::string(who) + ": grid spacings differ");
  }
}

}  // namespace

GridSpec GridSpec::square(int n, double half_extent, ComplexPoint center) {
  if (n < 2 || !(half_extent > 0.0)) throw ConfigError("GridSpec::square: need n >= 2 and a positive extent");
  const double d = 2.0 * half_extent / (n - 1);
  return {n, n, center, d, d};
}

void GridSpec::validate() const {
  if (nx <= 0 || ny <= 0) throw ConfigError("grid dimensions must be positive");
  if (!(dx > 0.0) || !(dy > 0.0)) throw ConfigError("grid spacings must be positive");
}

bool same_layout(const GridSpec& a, const GridSpec& b, double rel_tol) {
  const double tol = rel_tol * std::max({a.dx, a.dy, 1.0});
  return a.nx == b.nx && a.ny == b.ny && std::abs(a.dx - b.dx) <= tol && std::abs(a.dy - b.dy) <= tol &&
         std::abs(a.center.re - b.center.re) <= tol && std::abs(a.center.im - b.center.im) <= tol;
}

PhaseSpaceGrid sample(const GridSpec& spec, const std::function<cplx(ComplexPoint)>& f) {
  PhaseSpaceGrid g(spec);
  detail::parallel_for(spec.ny, [&](int iy) {
    for (int ix = 0; ix < spec.nx; ++ix) g.at(ix, iy) = f(spec.point(ix, iy));
  });
  return g;
}

PhaseSpaceGrid sample_function(const GaussianPhaseFunction& f, const GridSpec& spec, double coverage_widths) {
  PhaseSpaceGrid g = sample(spec, [&](ComplexPoint a) { return f(a); });
  if (is_decaying(f.ordering)) {
    const auto w = kernel_widths(f.ordering);
    const double narrow = w[0] / f.scale;
    const double wide = w[1] / f.scale;
    if (std::max(spec.dx, spec.dy) > 0.5 * narrow) {
      std::ostringstream os;
      os << "GridTooCoarse: spacing " << std::max(spec.dx, spec.dy) << " exceeds half the kernel width " << narrow;
      g.warnings.push_back(os.str());
    }
    const double cx = f.mean.re / f.scale;
    const double cy = f.mean.im / f.scale;
    const double reach = coverage_widths * wide;
    const bool covered = cx - reach >= spec.x(0) && cx + reach <= spec.x(spec.nx - 1) && cy - reach >= spec.y(0) &&
                         cy + reach <= spec.y(spec.ny - 1);
    if (!covered) {
      std::ostringstream os;
      os << "GridCoverage: extent covers fewer than " << coverage_widths << " kernel widths";
      g.warnings.push_back(os.str());
    }
  }
  return g;
}

cplx grid_integral(const PhaseSpaceGrid& a) {
  // Row sums first, then rows in order, so the result never depends on threading.
  cplx total{0.0};
  for (int iy = 0; iy < a.spec.ny; ++iy) {
    cplx row{0.0};
    for (int ix = 0; ix < a.spec.nx; ++ix) row += a.at(ix, iy);
    total += row;
  }
  return total * a.spec.cell_measure();
}

PhaseSpaceGrid convolve_grids(const PhaseSpaceGrid& a, const PhaseSpaceGrid& b) {
  require_same_spacing(a.spec, b.spec, "convolve_grids");
  const int nx = a.spec.nx + b.spec.nx - 1;
  const int ny = a.spec.ny + b.spec.ny - 1;
  const int px = smooth_size(nx);
  const int py = smooth_size(ny);

  auto load = [&](const PhaseSpaceGrid& g) {
    std::vector<cplx> buf(static_cast<std::size_t>(px) * py, cplx{0.0});
    for (int iy = 0; iy < g.spec.ny; ++iy)
      for (int ix = 0; ix < g.spec.nx; ++ix) buf[static_cast<std::size_t>(iy) * px + ix] = g.at(ix, iy);
    detail::fft2d(buf, py, px, -1);
    return buf;
  };
  std::vector<cplx> fa = load(a);
  const std::vector<cplx> fb = load(b);
  for (std::size_t i = 0; i < fa.size(); ++i) fa[i] *= fb[i];
  detail::fft2d(fa, py, px, +1);

  GridSpec spec{nx, ny, {a.spec.center.re + b.spec.center.re, a.spec.center.im + b.spec.center.im}, a.spec.dx,
                a.spec.dy};
  PhaseSpaceGrid out(spec);
  const double scale = a.spec.cell_measure() / (static_cast<double>(px) * py);
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix) out.at(ix, iy) = fa[static_cast<std::size_t>(iy) * px + ix] * scale;
  return out;
}

PhaseSpaceGrid convolve_same(const PhaseSpaceGrid& f, const PhaseSpaceGrid& kernel) {
  if (kernel.spec.nx % 2 == 0 || kernel.spec.ny % 2 == 0) {
    throw MismatchedGrids("convolve_same: kernel grid must have odd dimensions");
  }
  PhaseSpaceGrid full = convolve_grids(f, kernel);
  PhaseSpaceGrid out = crop(full, (kernel.spec.nx - 1) / 2, (kernel.spec.ny - 1) / 2, f.spec.nx, f.spec.ny);
  out.spec.center = f.spec.center;
  out.warnings = f.warnings;
  return out;
}

PhaseSpaceGrid convolve_with_ordering(const PhaseSpaceGrid& f, const OrderingVector& r, int pad) {
  if (r.is_zero()) return f;
  const GridSpec& s = f.spec;
  if (pad < 0) {
    if (is_decaying(r)) {
      const double wide = kernel_widths(r)[1];
      pad = static_cast<int>(std::ceil(8.0 * wide / std::min(s.dx, s.dy))) + 4;
    } else {
      pad = std::max(s.nx, s.ny) / 4;
    }
  }
  const int px = smooth_size(s.nx + 2 * pad);
  const int py = smooth_size(s.ny + 2 * pad);
  std::vector<cplx> buf(static_cast<std::size_t>(px) * py, cplx{0.0});
  for (int iy = 0; iy < s.ny; ++iy)
    for (int ix = 0; ix < s.nx; ++ix) buf[static_cast<std::size_t>(iy + pad) * px + ix + pad] = f.at(ix, iy);
  detail::fft2d(buf, py, px, -1);
  const double norm = 1.0 / (static_cast<double>(px) * py);
  detail::parallel_for(py, [&](int jy) {
    const double ky = detail::fft_frequency(jy, py, s.dy);
    for (int jx = 0; jx < px; ++jx) {
      const double kx = detail::fft_frequency(jx, px, s.dx);
      buf[static_cast<std::size_t>(jy) * px + jx] *= kernel_transform(r, cplx{-0.5 * ky, 0.5 * kx}) * norm;
    }
  });
  detail::fft2d(buf, py, px, +1);
  PhaseSpaceGrid out(s);
  out.warnings = f.warnings;
  for (int iy = 0; iy < s.ny; ++iy)
    for (int ix = 0; ix < s.nx; ++ix) out.at(ix, iy) = buf[static_cast<std::size_t>(iy + pad) * px + ix + pad];
  return out;
}

PhaseSpaceGrid pad_grid(const PhaseSpaceGrid& f, int pad) {
  if (pad < 0) throw ConfigError("pad_grid: negative pad");
  GridSpec spec = f.spec;
  spec.nx += 2 * pad;
  spec.ny += 2 * pad;
  PhaseSpaceGrid out(spec);
  out.warnings = f.warnings;
  for (int iy = 0; iy < f.spec.ny; ++iy)
    for (int ix = 0; ix < f.spec.nx; ++ix) out.at(ix + pad, iy + pad) = f.at(ix, iy);
  return out;
}

PhaseSpaceGrid crop(const PhaseSpaceGrid& f, int x0, int y0, int nx, int ny) {
  if (x0 < 0 || y0 < 0 || x0 + nx > f.spec.nx || y0 + ny > f.spec.ny) throw ConfigError("crop: window out of range");
  GridSpec spec = f.spec;
  spec.nx = nx;
  spec.ny = ny;
  spec.center = {f.spec.x(x0) + 0.5 * (nx - 1) * f.spec.dx, f.spec.y(y0) + 0.5 * (ny - 1) * f.spec.dy};
  PhaseSpaceGrid out(spec);
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix) out.at(ix, iy) = f.at(ix + x0, iy + y0);
  return out;
}

cplx interpolate_bicubic(const PhaseSpaceGrid& g, ComplexPoint p) {
  const GridSpec& s = g.spec;
  const double fx = (p.re - s.x(0)) / s.dx;
  const double fy = (p.im - s.y(0)) / s.dy;
  constexpr double slack = 1e-9;
  if (fx < -slack || fy < -slack || fx > s.nx - 1 + slack || fy > s.ny - 1 + slack) {
    std::ostringstream os;
    os << "interpolation point (" << p.re << ", " << p.im << ") lies outside the sampled region";
    throw ExtentTooSmall(os.str());
  }
  const int ix = std::clamp(static_cast<int>(std::floor(fx)), 0, std::max(s.nx - 2, 0));
  const int iy = std::clamp(static_cast<int>(std::floor(fy)), 0, std::max(s.ny - 2, 0));
  const double tx = fx - ix;
  const double ty = fy - iy;
  cplx out{0.0};
  for (int j = -1; j <= 2; ++j) {
    const int yy = std::clamp(iy + j, 0, s.ny - 1);
    cplx row{0.0};
    for (int i = -1; i <= 2; ++i) {
      const int xx = std::clamp(ix + i, 0, s.nx - 1);
      row += keys(tx - i) * g.at(xx, yy);
    }
    out += keys(ty - j) * row;
  }
  return out;
}

double linf_distance(const PhaseSpaceGrid& a, const PhaseSpaceGrid& b) {
  if (!same_layout(a.spec, b.spec)) throw MismatchedGrids("linf_distance: grids differ in layout");
  double m = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
  return m;
}

double l2_distance(const PhaseSpaceGrid& a, const PhaseSpaceGrid& b) {
  if (!same_layout(a.spec, b.spec)) throw MismatchedGrids("l2_distance: grids differ in layout");
  double s = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) s += std::norm(a.values[i] - b.values[i]);
  return std::sqrt(s * a.spec.cell_measure());
}

double max_abs_imag(const PhaseSpaceGrid& a) {
  double m = 0.0;
  for (const auto& v : a.values) m = std::max(m, std::abs(v.imag()));
  return m;
}

}  // namespace sqw
