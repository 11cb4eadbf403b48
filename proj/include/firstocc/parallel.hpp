#pragma once

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace firstocc {

// Runs fn(0) .. fn(n - 1) across a small thread pool. Callers index into
// pre-sized result buffers and derive per-index RNG streams, so the outcome
// does not depend on scheduling.
inline void parallel_for(int n, const std::function<void(int)>& fn) {
  if (n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  const unsigned workers =
      std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()), n);
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  }
  for (std::thread& t : pool) t.join();
}

}  // namespace firstocc
