#pragma once

#include <algorithm>
#include <functional>
#include <thread>
#include <vector>

namespace gsopt {

// Static-chunked parallel loop. Callers only use it where iterations write
// to disjoint slots, and all reductions happen serially afterwards, so the
// result never depends on n_threads. n_threads <= 1 runs inline.
inline void parallel_for(int n, int n_threads,
                         const std::function<void(int)>& fn) {
  if (n <= 0) return;
  n_threads = std::min(n_threads, n);
  if (n_threads <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  int chunk = (n + n_threads - 1) / n_threads;
  for (int t = 0; t < n_threads; ++t) {
    int lo = t * chunk;
    int hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (int i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace gsopt
