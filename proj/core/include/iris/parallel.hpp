#pragma once

#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace iris {

// Runs fn(i) for i in [begin, end) on up to `threads` workers (0 = hardware
// concurrency), contiguous static chunks. The first exception thrown by any
// worker is rethrown after all workers join. Callers get determinism by
// writing results to per-index slots.
template <typename Fn>
void parallel_for(std::size_t begin, std::size_t end, Fn&& fn, unsigned threads = 0) {
  if (end <= begin) return;
  const std::size_t n = end - begin;
  unsigned want = threads ? threads : std::thread::hardware_concurrency();
  if (want == 0) want = 1;
  if (static_cast<std::size_t>(want) > n) want = static_cast<unsigned>(n);

  if (want <= 1) {
    for (std::size_t i = begin; i < end; ++i) fn(i);
    return;
  }

  std::mutex err_mutex;
  std::exception_ptr first_error;
  std::vector<std::thread> workers;
  workers.reserve(want);
  const std::size_t chunk = (n + want - 1) / want;
  for (unsigned w = 0; w < want; ++w) {
    const std::size_t lo = begin + static_cast<std::size_t>(w) * chunk;
    if (lo >= end) break;
    const std::size_t hi = std::min(end, lo + chunk);
    workers.emplace_back([&, lo, hi] {
      try {
        for (std::size_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : workers) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace iris
