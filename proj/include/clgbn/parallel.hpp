#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <limits>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

#include "clgbn/error.hpp"

namespace clgbn {

// Runs fn(i) for every i in [0, n) on `workers` threads pulling indices from a
// shared counter. If any call throws, remaining indices are abandoned and the
// exception of the lowest failing index observed is rethrown.
template <class Fn>
void parallel_for(std::size_t n, std::size_t workers, Fn&& fn) {
  if (workers == 0) throw InvalidArgument("workers must be >= 1");
  if (workers == 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::mutex mutex;
  std::size_t error_at = std::numeric_limits<std::size_t>::max();
  std::exception_ptr error;
  auto work = [&] {
    for (;;) {
      if (stop.load(std::memory_order_relaxed)) return;
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(mutex);
        if (i < error_at) {
          error_at = i;
          error = std::current_exception();
        }
        stop = true;
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    const std::size_t count = std::min(workers, n);
    pool.reserve(count);
    for (std::size_t w = 0; w < count; ++w) pool.emplace_back(work);
  }
  if (error) std::rethrow_exception(error);
}

// Splits [0, n) into `workers` contiguous ranges and runs fn(begin, end) on each.
template <class Fn>
void parallel_ranges(std::size_t n, std::size_t workers, Fn&& fn) {
  if (workers == 0) throw InvalidArgument("workers must be >= 1");
  const std::size_t parts = std::max<std::size_t>(1, std::min(workers, n));
  parallel_for(parts, parts, [&](std::size_t p) { fn(p * n / parts, (p + 1) * n / parts); });
}

// Pairwise (cascade) sum with bracketing fixed by position: the result
// depends only on the values and their order.
inline double pairwise_sum(std::span<const double> v) {
  if (v.empty()) return 0.0;
  if (v.size() <= 8) {
    double s = v[0];
    for (std::size_t i = 1; i < v.size(); ++i) s += v[i];
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

}  // namespace clgbn
