#pragma once

#include <cstddef>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace partsim {

/// Worker count requested via PARTSIM_THREADS; 1 when unset or unparsable.
inline unsigned thread_count_from_env() {
  const char* s = std::getenv("PARTSIM_THREADS");
  if (!s) return 1;
  char* end = nullptr;
  long v = std::strtol(s, &end, 10);
  if (end == s || v < 1) return 1;
  return static_cast<unsigned>(v);
}

/// Runs body(i) for every i in [0, n), statically strided across `threads`
/// workers. Each iteration must write only to its own output slot; callers
/// then reduce the slots in index order, which keeps results bit-identical
/// for any thread count.
inline void parallel_for_slots(std::size_t n, unsigned threads,
                               const std::function<void(std::size_t)>& body) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  if (threads > n) threads = static_cast<unsigned>(n);

  std::mutex mu;
  std::exception_ptr first_error;
  std::vector<std::thread> workers;
  workers.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    workers.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < n; i += threads) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace partsim
