// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace ftkl {

// Worker count: FTKL_THREADS if set, otherwise the hardware count.
inline int thread_count() {
  if (const char *s = std::getenv("FTKL_THREADS")) {
    int v = std::atoi(s);
    if (v >= 1) return std::min(v, 256);
  }
  unsigned h = std::thread::hardware_concurrency();
  return h ? static_cast<int>(h) : 1;
}

// Splits [0, n) into one contiguous chunk per worker.  Deterministic as
// long as chunks write disjoint state (no shared accumulators).
inline void parallel_for_chunks(long n,
                                const std::function<void(long, long)> &fn) {
  if (n <= 0) return;
  long t = std::min<long>(thread_count(), n);
  if (t <= 1) {
    fn(0, n);
    return;
  }
  long chunk = (n + t - 1) / t;
  std::vector<std::thread> workers;
  for (long k = 0; k < t; ++k) {
    long i0 = k * chunk, i1 = std::min(n, i0 + chunk);
    if (i0 >= i1) break;
    workers.emplace_back(fn, i0, i1);
  }
  for (auto &w : workers) w.join();
}

} // namespace ftkl
