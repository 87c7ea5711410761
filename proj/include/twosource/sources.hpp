#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "twosource/bitstring.hpp"

namespace twosource {

/// Places x's bits at positions 1, 1+period, 1+2*period, ... and zeros
/// elsewhere. period = 2 gives x1 0 x2 0 ...
BitString zero_dilute(const BitString& x, std::size_t period);

/// Pseudorandom bits from SplitMix64: bit t (0-based) is bit (t mod 64) of
/// the (t div 64)-th output of the stream seeded with `seed`.
BitString seeded_source(std::uint64_t seed, std::size_t length);

// Bounded-prefix oracle over a finite string. Tracks the largest index any
// read has touched. Not safe for concurrent use.
class OracleSource {
 public:
  explicit OracleSource(BitString underlying) : data_(std::move(underlying)) {}

  /// x(n1:n2), 1-based inclusive. Throws RangeError naming requested and
  /// available lengths.
  BitString read(std::size_t n1, std::size_t n2);

  std::size_t queries_served() const { return queries_served_; }
  std::size_t available() const { return data_.size(); }

 private:
  BitString data_;
  std::size_t queries_served_ = 0;
};

/// ASCII '0'/'1', optional single trailing newline ("\n" or "\r\n").
BitString read_bits_file(const std::filesystem::path& path);
void write_bits_file(const std::filesystem::path& path, const BitString& bits);

/// Generator spec: `seed:<int>,len:<int>`, optionally followed by one or more
/// `|dilute:<period>` stages, e.g. `seed:3,len:1024|dilute:2`.
BitString generate_from_spec(std::string_view spec);

}  // namespace twosource
