#pragma once

#include <cstdint>

namespace quakeb {

/// SplitMix64 (Steele, Lea & Flood 2014). Chosen over the standard-library
/// engines because the uniform mapping below is pinned bit-for-bit: the same
/// seed yields the same catalog and the same initial weights on any platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform strictly inside (0, 1); safe to feed into logarithms.
  double uniform_open() { return (static_cast<double>(next() >> 12) + 0.5) * 0x1.0p-52; }

  /// Uniform in the open interval (lo, hi).
  double uniform_in(double lo, double hi) { return lo + (hi - lo) * uniform_open(); }

 private:
  std::uint64_t state_;
};

}  // namespace quakeb
