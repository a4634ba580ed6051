#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace superpat {

// Splits [0, n) into contiguous chunks, evaluates fn(begin, end) on up to
// `threads` workers and folds the chunk results with +=. Callers only reduce
// integer tallies, so the result does not depend on the thread count.
template <class T, class Fn>
T parallel_reduce(std::uint64_t n, unsigned threads, Fn&& fn) {
  threads = std::max(1u, threads);
  if (threads == 1 || n < 2) return fn(std::uint64_t{0}, n);
  const std::uint64_t workers = std::min<std::uint64_t>(threads, n);
  std::vector<T> partial(workers);
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::uint64_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        const std::uint64_t begin = n * w / workers;
        const std::uint64_t end = n * (w + 1) / workers;
        try {
          partial[w] = fn(begin, end);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  T total{};
  for (auto& p : partial) total += p;
  return total;
}

}  // namespace superpat
