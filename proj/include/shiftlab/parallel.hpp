#pragma once

#include "shiftlab/types.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace shiftlab {

// Worker cap: SHIFTLAB_THREADS if set, else hardware concurrency.
inline int worker_count() {
  if (const char* env = std::getenv("SHIFTLAB_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Partition [0,n) into contiguous row blocks, one worker each. Every entry
// is computed by exactly one worker, so results do not depend on the worker
// count and stay bit-reproducible.
inline void parallel_rows(Index n, const std::function<void(Index, Index)>& body) {
  const int workers = std::min<Index>(worker_count(), std::max<Index>(n / 64, 1));
  if (workers <= 1 || n < 128) {
    body(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const Index chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const Index lo = w * chunk;
    const Index hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&body, lo, hi] { body(lo, hi); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace shiftlab
