#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace nordvlas {

/// Static block partition of [0, n) over `workers` threads.
///
/// fn(begin, end, worker) runs once per non-empty block. Block boundaries
/// depend only on (n, workers), so per-worker partial results merged in
/// worker order are reproducible for a fixed worker count.
template <class Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
  const auto w = static_cast<std::size_t>(std::max(1, workers));
  if (w == 1 || n < 2 * w) {
    if (n > 0) fn(std::size_t{0}, n, 0);
    return;
  }
  const std::size_t chunk = (n + w - 1) / w;
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(w);
  pool.reserve(w);
  for (std::size_t t = 0; t < w; ++t) {
    const std::size_t begin = t * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end, t] {
      try {
        fn(begin, end, static_cast<int>(t));
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

/// Number of blocks parallel_for will use for n items.
inline int effective_workers(std::size_t n, int workers) {
  const auto w = static_cast<std::size_t>(std::max(1, workers));
  if (w == 1 || n < 2 * w) return 1;
  const std::size_t chunk = (n + w - 1) / w;
  return static_cast<int>((n + chunk - 1) / chunk);
}

}  // namespace nordvlas
