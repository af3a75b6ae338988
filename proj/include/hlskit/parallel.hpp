#pragma once

#include <cstddef>
#include <cstdlib>
#include <thread>
#include <vector>

namespace hlskit {

/// Thread budget for internal parallel loops. Reads HLSKIT_THREADS; falls
/// back to the hardware count. Always at least 1.
inline unsigned thread_budget() {
  if (const char* env = std::getenv("HLSKIT_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
    return 1;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Runs f(i) for i in [0, n). Each index writes only its own output slots,
/// so the result does not depend on the schedule.
template <class F>
void parallel_for(std::size_t n, F&& f) {
  unsigned threads = thread_budget();
  if (threads <= 1 || n < 32) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  if (threads > n) threads = static_cast<unsigned>(n);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < n; i += threads) f(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace hlskit
