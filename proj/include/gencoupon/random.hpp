#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace gencoupon {

/// Single-owner pseudo-random generator used throughout the library.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Seed of trial `index` under `master_seed`. Depends only on the pair, so trials
/// can be run in any order or on any thread.
constexpr std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t index) noexcept {
  return mix64(mix64(master_seed) ^ mix64(index + 0xD1B54A32D192ED03ULL));
}

/// Exactly uniform integer in [0, bound). Masks when bound is a power of two,
/// rejects otherwise.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  if ((bound & (bound - 1)) == 0) return rng() & (bound - 1);
  // 2^64 mod bound low outputs are discarded so every residue has equal mass.
  const std::uint64_t reject_below = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= reject_below) return r % bound;
  }
}

}  // namespace gencoupon
