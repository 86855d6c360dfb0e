#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace fqgeom {

/// Splits [0, n) into contiguous blocks, runs `work(begin, end)` on each block
/// in its own thread and folds the partial results left to right with `merge`.
/// Block boundaries depend on `workers`; an associative merge makes the result
/// independent of the worker count.
template <class Partial, class Work, class Merge>
Partial parallel_reduce(std::uint64_t n, unsigned workers, Work&& work, Merge&& merge) {
  workers = std::max(1u, workers);
  if (workers == 1 || n < 2) return work(std::uint64_t{0}, n);
  const std::uint64_t blocks = std::min<std::uint64_t>(workers, n);
  std::vector<Partial> partials(blocks);
  std::vector<std::exception_ptr> errors(blocks);
  std::vector<std::thread> threads;
  threads.reserve(blocks);
  for (std::uint64_t b = 0; b < blocks; ++b) {
    const std::uint64_t lo = n * b / blocks;
    const std::uint64_t hi = n * (b + 1) / blocks;
    threads.emplace_back([&, b, lo, hi] {
      try {
        partials[b] = work(lo, hi);
      } catch (...) {
        errors[b] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  Partial acc = std::move(partials[0]);
  for (std::uint64_t b = 1; b < blocks; ++b) acc = merge(std::move(acc), std::move(partials[b]));
  return acc;
}

}  // namespace fqgeom
