#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "twosource/bitstring.hpp"

namespace twosource {

// Compression-based complexity estimate. The compressor is zlib's DEFLATE
// (zlib container, compress2 at level 9); the bit string is packed 8 bits per
// byte, first bit most significant, last byte zero padded. The padding
// length (< 8) is implied by the bit length and is not counted.
struct Khat {
  std::uint64_t raw_bits = 0;        // 8 * compressed size
  std::uint64_t corrected_bits = 0;  // raw minus the empty-input container size
};

/// Compressed size of the empty input in bits (the container overhead).
std::uint64_t compressor_overhead_bits();
/// zlibVersion() of the linked library.
std::string compressor_version();

/// Requires nonempty input.
Khat khat(const BitString& bits);
/// Corrected estimate, the value used by every profile.
std::uint64_t khat_bits(const BitString& bits);

struct RateCheckpoint {
  std::size_t prefix_len = 0;
  std::uint64_t khat_bits = 0;  // corrected
  std::uint64_t raw_bits = 0;
  double ratio = 0;             // khat_bits / prefix_len
};

struct RateEstimate {
  std::vector<RateCheckpoint> checkpoints;
};

/// Checkpoints must be nondecreasing, each in 1..|bits|; else RangeError /
/// std::invalid_argument.
RateEstimate rate_profile(const BitString& bits, const std::vector<std::size_t>& checkpoints);

struct DependencyEstimate {
  std::size_t n = 0;
  std::size_t m = 0;
  std::uint64_t khat_x = 0;
  std::uint64_t khat_y = 0;
  std::uint64_t khat_xy = 0;
  /// khat_x + khat_y - khat_xy; negative values are compressor noise and
  /// are reported as is.
  std::int64_t value = 0;
};

/// Requires 1 <= n <= |x| and 1 <= m <= |y|. The joint estimate packs
/// x(1:n), zero padding to a whole byte, then y(1:m).
DependencyEstimate dependency_profile(const BitString& x, const BitString& y, std::size_t n, std::size_t m);

/// Default threshold above which a dependency value is labeled "dependent":
/// 8 * (ceil(log2 n) + ceil(log2 m)) bits.
std::int64_t default_dependency_threshold(std::size_t n, std::size_t m);

std::string rate_csv(const RateEstimate& r);
std::string dependency_csv(const std::vector<DependencyEstimate>& rows);

}  // namespace twosource
