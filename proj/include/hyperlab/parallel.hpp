#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace hyperlab {

/// Worker count used by data-parallel kernels. 0 means hardware concurrency.
void set_thread_count(unsigned count);
unsigned thread_count();

/// Runs body(i) for i in [0, n). Each index is visited exactly once, so
/// results written to index-addressed slots do not depend on scheduling.
template <typename Body>
void parallel_for(std::size_t n, Body&& body) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(thread_count(), n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) body(i);
    });
  }
}

}  // namespace hyperlab
