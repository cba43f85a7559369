#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>

namespace netbench {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Counter-based per-task seeds: identical (master, a, b) always yields the same
// stream, so work can be scheduled across any number of threads.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
  std::uint64_t s = splitmix64(master);
  s = splitmix64(s ^ (a + 0x9E3779B97F4A7C15ULL));
  s = splitmix64(s ^ (b + 0xC2B2AE3D27D4EB4FULL));
  return s;
}

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

// Unbiased bounded draw; mt19937_64 output is pinned by the standard, so this
// stays reproducible across library implementations.
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  if (n == 0) throw std::invalid_argument("uniform_index: empty range");
  const std::uint64_t threshold = (0 - static_cast<std::uint64_t>(n)) % n;
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= threshold) return static_cast<std::size_t>(r % n);
  }
}

inline bool uniform_bit(Rng& rng) { return uniform_index(rng, 2) == 1; }

}  // namespace netbench
