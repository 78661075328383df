#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sqw/kernel.hpp"
#include "sqw/types.hpp"

namespace sqw {

// Uniform sampling of the complex plane. Point (ix, iy) sits at
// center + ((ix - (nx-1)/2) dx, (iy - (ny-1)/2) dy).
struct GridSpec {
  int nx = 0;
  int ny = 0;
  ComplexPoint center;
  double dx = 0.0;
  double dy = 0.0;

  static GridSpec square(int n, double half_extent, ComplexPoint center = {});

  double x(int ix) const { return center.re + (ix - 0.5 * (nx - 1)) * dx; }
  double y(int iy) const { return center.im + (iy - 0.5 * (ny - 1)) * dy; }
  ComplexPoint point(int ix, int iy) const { return {x(ix), y(iy)}; }
  double cell_measure() const { return dx * dy / kPi; }
  double half_width_x() const { return 0.5 * (nx - 1) * dx; }
  double half_width_y() const { return 0.5 * (ny - 1) * dy; }
  std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
  void validate() const;
};

bool same_layout(const GridSpec& a, const GridSpec& b, double rel_tol = 1e-12);

struct PhaseSpaceGrid {
  GridSpec spec;
  std::vector<cplx> values;  // row-major in iy, index iy * nx + ix
  std::vector<std::string> warnings;

  PhaseSpaceGrid() = default;
  explicit PhaseSpaceGrid(const GridSpec& s) : spec(s), values(s.size(), cplx{0.0}) { s.validate(); }

  cplx& at(int ix, int iy) { return values[static_cast<std::size_t>(iy) * spec.nx + ix]; }
  const cplx& at(int ix, int iy) const { return values[static_cast<std::size_t>(iy) * spec.nx + ix]; }
};

PhaseSpaceGrid sample(const GridSpec& spec, const std::function<cplx(ComplexPoint)>& f);

// Evaluates f on the grid. Adds a GridTooCoarse warning when the spacing exceeds
// half the narrowest kernel width and a coverage warning below `coverage_widths`.
PhaseSpaceGrid sample_function(const GaussianPhaseFunction& f, const GridSpec& spec, double coverage_widths = 6.0);

cplx grid_integral(const PhaseSpaceGrid& a);

// Full linear convolution (a * b)(x) = sum a(y) b(x - y) dx dy / pi on the grid of
// all pairwise sums: n = na + nb - 1, centered at ca + cb.
PhaseSpaceGrid convolve_grids(const PhaseSpaceGrid& a, const PhaseSpaceGrid& b);

// Convolution with an odd-sized kernel grid centered at the origin, cropped back to f's layout.
PhaseSpaceGrid convolve_same(const PhaseSpaceGrid& f, const PhaseSpaceGrid& kernel);

// Convolution with g_r using its exact Fourier multiplier. Works for any r,
// including near-delta kernels that cannot be sampled. `pad` cells of zeros are
// added on every side; negative selects a pad from the kernel width.
PhaseSpaceGrid convolve_with_ordering(const PhaseSpaceGrid& f, const OrderingVector& r, int pad = -1);

// Same points, wider or narrower frame; new cells are zero.
PhaseSpaceGrid pad_grid(const PhaseSpaceGrid& f, int pad);
PhaseSpaceGrid crop(const PhaseSpaceGrid& f, int x0, int y0, int nx, int ny);

// Keys cubic convolution (a = -0.5). Throws ExtentTooSmall outside the sampled square.
cplx interpolate_bicubic(const PhaseSpaceGrid& g, ComplexPoint p);

double linf_distance(const PhaseSpaceGrid& a, const PhaseSpaceGrid& b);
// sqrt(sum |a - b|^2 dx dy / pi)
double l2_distance(const PhaseSpaceGrid& a, const PhaseSpaceGrid& b);
double max_abs_imag(const PhaseSpaceGrid& a);

}  // namespace sqw
