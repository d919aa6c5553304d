#pragma once

// Minimal data-parallel loop. FLOWLAB_THREADS caps the worker count
// (0 or unset = hardware concurrency).

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace flowlab {

inline unsigned thread_count() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("FLOWLAB_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return hw;
}

/// Calls body(i) for i in [0, n), split into contiguous blocks. Bodies must
/// only write to disjoint locations.
template <class Body>
void parallel_for(int n, const Body& body) {
  const unsigned workers = std::min<unsigned>(thread_count(), static_cast<unsigned>(std::max(n, 1)));
  if (workers <= 1 || n < 64) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  const int block = (n + static_cast<int>(workers) - 1) / static_cast<int>(workers);
  for (unsigned w = 0; w < workers; ++w) {
    const int lo = static_cast<int>(w) * block;
    const int hi = std::min(n, lo + block);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (int i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace flowlab
