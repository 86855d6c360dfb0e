#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

namespace fqgeom {

/// 64-bit linear congruential generator (Knuth MMIX constants):
///   state <- 6364136223846793005 * state + 1442695040888963407  (mod 2^64)
/// next() returns the updated state; below(n) = ((next() >> 32) * n) >> 32.
/// These two rules are the whole contract, so any language can replay a seed.
class Lcg {
 public:
  static constexpr std::uint64_t kMultiplier = 6364136223846793005ULL;
  static constexpr std::uint64_t kIncrement = 1442695040888963407ULL;

  explicit Lcg(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ = state_ * kMultiplier + kIncrement;
    return state_;
  }

  /// Uniform-ish integer in [0, n), n < 2^32.
  std::uint64_t below(std::uint64_t n) { return ((next() >> 32) * n) >> 32; }

  /// Inclusive range [lo, hi].
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }

  /// m distinct values from [0, n) by a partial Fisher-Yates shuffle, sorted.
  std::vector<std::uint64_t> sample(std::uint64_t n, std::uint64_t m) {
    m = std::min(m, n);
    std::vector<std::uint64_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::uint64_t{0});
    for (std::uint64_t i = 0; i < m; ++i) std::swap(idx[i], idx[i + below(n - i)]);
    idx.resize(m);
    std::sort(idx.begin(), idx.end());
    return idx;
  }

 private:
  std::uint64_t state_;
};

}  // namespace fqgeom
