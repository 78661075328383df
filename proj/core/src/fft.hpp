#pragma once

#include <vector>

#include "sqw/types.hpp"

namespace sqw::detail {

// In-place unnormalized 2-D DFT of an ny-by-nx row-major array.
// sign = -1 forward, +1 backward.
void fft2d(std::vector<cplx>& data, int ny, int nx, int sign);

// Angular frequency of DFT bin j for n samples at spacing d.
double fft_frequency(int j, int n, double d);

}  // namespace sqw::detail
