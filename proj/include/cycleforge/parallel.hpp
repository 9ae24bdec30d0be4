#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace cycleforge {

// Thread cap: min(hardware, CYCLEFORGE_THREADS). Defaults to hardware.
inline unsigned thread_cap() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("CYCLEFORGE_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1 && static_cast<unsigned>(v) < hw) hw = static_cast<unsigned>(v);
  }
  return hw;
}

// Static block partition over [0, count). Workers never share output slots,
// so results are schedule-independent; callers merge blocks in index order.
inline void parallel_blocks(std::size_t count,
                            const std::function<void(std::size_t, std::size_t)>& body) {
  unsigned workers = thread_cap();
  if (workers <= 1 || count < 256) {
    body(0, count);
    return;
  }
  workers = std::min<std::size_t>(workers, count);
  std::vector<std::thread> pool;
  std::size_t chunk = (count + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    std::size_t lo = w * chunk;
    std::size_t hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back(body, lo, hi);
  }
  for (auto& t : pool) t.join();
}

}  // namespace cycleforge
