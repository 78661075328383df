#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "sqw/grid.hpp"
#include "sqw/types.hpp"

namespace sqw {

using Metadata = std::vector<std::pair<std::string, std::string>>;

// Shortest round-trip decimal form.
std::string format_double(double v);

// "# key=value" header lines (nx, ny, center_re, center_im, dx, dy, then extras),
// a column line, and one row per cell: ix,iy,re_alpha,im_alpha,re_value,im_value.
void write_grid_csv(std::ostream& os, const PhaseSpaceGrid& g, const Metadata& extra = {});
PhaseSpaceGrid read_grid_csv(std::istream& is);
void save_grid_csv(const std::filesystem::path& path, const PhaseSpaceGrid& g, const Metadata& extra = {});
PhaseSpaceGrid load_grid_csv(const std::filesystem::path& path);

// row,col,re,im with the same header style.
void write_matrix_csv(std::ostream& os, const Matrix& m, const Metadata& meta = {});
Matrix read_matrix_csv(std::istream& is);
void save_matrix_csv(const std::filesystem::path& path, const Matrix& m, const Metadata& meta = {});

}  // namespace sqw
