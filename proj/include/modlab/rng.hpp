#pragma once

// Minimal SplitMix64 generator. Used instead of <random> distributions so
// that seeded sample points are bit-identical across platforms and library
// versions.

#include <cstdint>

namespace modlab {

struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform double in [lo, hi) with 53 random bits.
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * ((next() >> 11) * 0x1.0p-53);
  }
};

}  // namespace modlab
