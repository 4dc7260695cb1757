#pragma once

#include <array>
#include <cstdint>

#include "cul/error.hpp"

namespace cul {

// =====================================================================
// Deterministic random stream (xoshiro256++, splitmix64-seeded).
//
// The standard <random> engines are portable but the distributions are
// not; everything here is specified bit-for-bit so that identical seeds
// give identical graphs and weights on any platform.
// =====================================================================

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline std::uint64_t rotl64(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace detail

class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : s_) word = detail::splitmix64(sm);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = detail::rotl64(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = detail::rotl64(s_[3], 45);
    return result;
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n). Masked rejection keeps the draw unbiased.
  std::uint64_t uniform_int(std::uint64_t n) {
    if (n == 0) throw NumericError("uniform_int: empty range");
    if ((n & (n - 1)) == 0) return next_u64() & (n - 1);
    std::uint64_t mask = ~std::uint64_t{0};
    mask >>= __builtin_clzll(n | 1);
    std::uint64_t r;
    do {
      r = next_u64() & mask;
    } while (r >= n);
    return r;
  }

  // Independent stream derived from this seed and a stream index; used to
  // give each generated graph its own reproducible stream.
  Rng split(std::uint64_t stream) const {
    std::uint64_t sm = s_[0] ^ detail::rotl64(stream + 0x9E3779B97F4A7C15ull, 31);
    return Rng(detail::splitmix64(sm));
  }

 private:
  std::array<std::uint64_t, 4> s_{};
};

}  // namespace cul
