#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

namespace dsmopt {

// All randomized code in this project draws through these helpers on top of
// std::mt19937_64. The engine's output stream is pinned by the standard, but
// std::uniform_int_distribution is not, so bounded draws are done here with
// rejection sampling to keep runs reproducible across toolchains.

// Uniform draw from {0, ..., n-1}. n must be positive.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  assert(n > 0);
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t reject_from = max - max % n;  // multiple of n
  std::uint64_t v = rng();
  while (v >= reject_from) v = rng();
  return v % n;
}

inline std::int64_t uniform_index(std::mt19937_64& rng, std::int64_t n) {
  return static_cast<std::int64_t>(uniform_below(rng, static_cast<std::uint64_t>(n)));
}

// ceil(pct * n) / floor(pct * n) with a small tolerance so products that are
// an integer up to rounding error stay in that bucket (0.1 * 30 must count as
// 3, not 4). Results are clamped to [0, n].
inline std::int64_t frac_ceil(double pct, std::int64_t n) {
  const auto v = static_cast<std::int64_t>(std::ceil(pct * static_cast<double>(n) - 1e-9));
  return std::clamp<std::int64_t>(v, 0, n);
}

inline std::int64_t frac_floor(double pct, std::int64_t n) {
  const auto v = static_cast<std::int64_t>(std::floor(pct * static_cast<double>(n) + 1e-9));
  return std::clamp<std::int64_t>(v, 0, n);
}

// First k entries of a uniformly random permutation of {0, ..., n-1}
// (partial Fisher-Yates). k == n yields a full shuffle.
inline std::vector<std::int32_t> sample_distinct(std::mt19937_64& rng, std::int32_t n,
                                                 std::int32_t k) {
  assert(k >= 0 && k <= n);
  std::vector<std::int32_t> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  for (std::int32_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::int32_t>(uniform_index(rng, n - i));
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
  }
  idx.resize(static_cast<std::size_t>(k));
  return idx;
}

}  // namespace dsmopt
