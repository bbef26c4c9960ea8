#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace nodalab {

// Thread count comes from the NODALAB_THREADS environment variable only;
// default is one worker so results never depend on the host machine.
inline int thread_count() {
  if (const char* env = std::getenv("NODALAB_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return 1;
}

// Static block partition; workers write to disjoint index ranges, so any
// reduction done by the caller afterwards is order-deterministic.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const int workers = thread_count();
  if (workers <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (count + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace nodalab
