// actopo: minimal fork-join helper for initialization-time parallelism.
#pragma once

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "actopo/ids.hpp"

namespace actopo {

// Runs fn(i) for i in [0, n) across up to max_threads workers (0 = hardware
// concurrency).  Falls back to a plain loop when one worker suffices.  The
// first exception thrown by any worker is rethrown on the calling thread.
template <class Fn>
void parallel_for(Id n, Fn&& fn, unsigned max_threads = 0) {
  if (n <= 0) return;
  unsigned workers = max_threads ? max_threads : std::thread::hardware_concurrency();
  workers = std::min<unsigned>(std::max(1u, workers), static_cast<unsigned>(n));
  if (workers == 1) {
    for (Id i = 0; i < n; ++i) fn(i);
    return;
  }

  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::exception_ptr error;
  std::mutex error_mutex;
  for (unsigned w = 0; w < workers; ++w) {
    const Id lo = static_cast<Id>(std::int64_t(n) * w / workers);
    const Id hi = static_cast<Id>(std::int64_t(n) * (w + 1) / workers);
    pool.emplace_back([&, lo, hi] {
      try {
        for (Id i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace actopo
