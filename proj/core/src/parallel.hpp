// Static-partition parallel loop. Results must be written per index so the
// outcome never depends on the thread count.
#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace evtlab::detail {

inline unsigned resolve_threads(unsigned requested, std::size_t work) {
  unsigned t = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
  return static_cast<unsigned>(std::min<std::size_t>(t, std::max<std::size_t>(work, 1)));
}

/// Calls f(i) for i in [0, n). If any call throws, the exception of the
/// lowest failing index is rethrown.
template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& f) {
  const unsigned t = resolve_threads(threads, n);
  if (t <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      f(i);
    }
    return;
  }
  std::vector<std::exception_ptr> errors(t);
  std::vector<std::size_t> error_index(t, n);
  std::vector<std::thread> pool;
  pool.reserve(t);
  for (unsigned w = 0; w < t; ++w) {
    pool.emplace_back([&, w] {
      const std::size_t lo = n * w / t;
      const std::size_t hi = n * (w + 1) / t;
      for (std::size_t i = lo; i < hi; ++i) {
        try {
          f(i);
        } catch (...) {
          errors[w] = std::current_exception();
          error_index[w] = i;
          return;
        }
      }
    });
  }
  for (auto& th : pool) {
    th.join();
  }
  // Partitions are ordered, so the first worker with an error holds the
  // lowest failing index.
  for (unsigned w = 0; w < t; ++w) {
    if (errors[w]) {
      std::rethrow_exception(errors[w]);
    }
  }
}

}  // namespace evtlab::detail
