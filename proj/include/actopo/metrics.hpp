// actopo: instrumentation shared by the data structures and the benchmark
// driver.  Everything here is cheap enough to stay enabled unconditionally;
// the hot-path counters are relaxed atomics.
#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>

namespace actopo {

// Tracks live bytes of the structures that own topological data and keeps a
// high-water mark.  add/sub may race from many threads; the peak is updated
// with a CAS loop so it never under-reports.
class MemoryMeter {
 public:
  void add(std::int64_t bytes) {
    const std::int64_t now = current_.fetch_add(bytes, std::memory_order_relaxed) + bytes;
    std::int64_t seen = peak_.load(std::memory_order_relaxed);
    while (now > seen && !peak_.compare_exchange_weak(seen, now, std::memory_order_relaxed)) {
    }
  }

  void sub(std::int64_t bytes) { current_.fetch_sub(bytes, std::memory_order_relaxed); }

  std::int64_t current_bytes() const { return current_.load(std::memory_order_relaxed); }
  std::int64_t peak_bytes() const { return peak_.load(std::memory_order_relaxed); }

  void reset() {
    current_.store(0, std::memory_order_relaxed);
    peak_.store(0, std::memory_order_relaxed);
  }

 private:
  std::atomic<std::int64_t> current_{0};
  std::atomic<std::int64_t> peak_{0};
};

// splitmix64 finalizer: a cheap, well-mixed hash step.  Workload checksums
// combine per-item hashes with '+' so the result is independent of the order
// in which threads visit the items.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
  return mix64(a ^ (mix64(b) + 0x9e3779b97f4a7c15ull));
}

struct StopWatch {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }

  std::int64_t nanoseconds() const {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() -
                                                                start)
        .count();
  }
};

}  // namespace actopo
