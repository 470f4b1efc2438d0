#pragma once
// Deterministic work partitioning: indices are split into contiguous chunks,
// one per worker, so every index runs exactly once no matter the thread
// budget. Callers keep determinism by writing results into per-index slots
// and reducing serially afterward.

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "hslv/errors.hpp"

namespace hslv {

template <typename F>
void parallel_for(std::size_t n, int threads, F&& fn) {
  if (threads < 1) {
    throw InvalidInput("parallel_for: thread count must be at least 1");
  }
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(threads),
                            std::max<std::size_t>(n, 1));
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      fn(i);
    }
    return;
  }
  const std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex error_mutex;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) {
      break;
    }
    pool.emplace_back([&fn, &first_error, &error_mutex, lo, hi] {
      try {
        for (std::size_t i = lo; i < hi; ++i) {
          fn(i);
        }
      } catch (...) {
        const std::lock_guard<std::mutex> guard(error_mutex);
        if (!first_error) {
          first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& worker : pool) {
    worker.join();
  }
  if (first_error) {
    std::rethrow_exception(first_error);
  }
}

}  // namespace hslv
