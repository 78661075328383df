#pragma once

#include <algorithm>
#include <thread>
#include <vector>

namespace sqw::detail {

// Runs body(i) for i in [0, n). Work items must write disjoint outputs, so the
// result does not depend on the thread count.
template <class F>
void parallel_for(int n, F&& body) {
  const int hw = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  const int workers = std::min(hw, n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (int i = w; i < n; i += workers) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace sqw::detail
