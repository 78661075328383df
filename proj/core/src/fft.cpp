#include "fft.hpp"

#include <fftw3.h>

#include <mutex>

namespace sqw::detail {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

void fft2d(std::vector<cplx>& data, int ny, int nx, int sign) {
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    // Planning is not thread safe; execution is. ESTIMATE keeps results reproducible.
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft_2d(ny, nx, p, p, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(plan);
}

double fft_frequency(int j, int n, double d) {
  const int k = j < (n + 1) / 2 ? j : j - n;
  return 2.0 * kPi * k / (n * d);
}

}  // namespace sqw::detail
