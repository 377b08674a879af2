#pragma once

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <thread>
#include <vector>

namespace selfishcc {

/// Worker count for enumeration sweeps: SELFISH_CC_THREADS when set,
/// otherwise the hardware concurrency clamped to [1, 8].
inline int default_worker_count() {
  if (const char* env = std::getenv("SELFISH_CC_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1 && v <= 64) return static_cast<int>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) return 1;
  return static_cast<int>(hw > 8 ? 8 : hw);
}

/// Splits [0, n) into contiguous ranges, runs `work(lo, hi)` on each in its
/// own thread and combines the partial results in range order, so the
/// outcome never depends on scheduling. Partials must be exact (integer or
/// rational) for the combination to be order-insensitive anyway.
template <typename Partial, typename Work, typename Combine>
Partial parallel_ranges(std::uint64_t n, int threads, Partial init, Work&& work,
                        Combine&& combine) {
  if (threads < 1) threads = default_worker_count();
  const auto ranges = static_cast<std::uint64_t>(threads) < n ? static_cast<std::uint64_t>(threads) : (n > 0 ? n : 1);
  if (ranges <= 1) {
    if (n > 0) combine(init, work(0, n));
    return init;
  }
  std::vector<Partial> partials(ranges);
  std::vector<std::thread> pool;
  pool.reserve(ranges);
  for (std::uint64_t r = 0; r < ranges; ++r) {
    const std::uint64_t lo = n * r / ranges;
    const std::uint64_t hi = n * (r + 1) / ranges;
    pool.emplace_back([&, r, lo, hi] { partials[r] = work(lo, hi); });
  }
  for (auto& th : pool) th.join();
  for (const Partial& p : partials) combine(init, p);
  return init;
}

}  // namespace selfishcc
