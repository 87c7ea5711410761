#pragma once

#include <cstdint>
#include <vector>

namespace twosource {

// SplitMix64 (Steele, Lea, Flood 2014). Every pseudorandom value in the
// project comes from this generator so results are identical on every
// platform and standard library. The j-th output (0-based) of the stream
// seeded with s is mix(s + (j + 1) * kGamma), which gives O(1) random access.
class SplitMix64 {
 public:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  static constexpr std::uint64_t at(std::uint64_t seed, std::uint64_t index) {
    return mix(seed + (index + 1) * kGamma);
  }

  std::uint64_t next() {
    state_ += kGamma;
    return mix(state_);
  }

  /// Uniform integer in [0, bound) by rejection; bound > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t r;
    do {
      r = next();
    } while (r >= limit);
    return r % bound;
  }

 private:
  std::uint64_t state_;
};

/// Uniform k-subset of {0, ..., n-1}, returned sorted ascending.
std::vector<std::uint64_t> sample_subset(SplitMix64& rng, std::uint64_t n, std::uint64_t k);

}  // namespace twosource
