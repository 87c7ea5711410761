#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace twosource {

// Finite binary string with 1-based accessors: bit(1) is the first bit and
// slice(n1, n2) is x(n1:n2), of length n2 - n1 + 1.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::vector<std::uint8_t> bits);

  /// Low `width` bits of `value`, bit j of the string = bit (j-1) of value.
  static BitString from_uint(std::uint64_t value, std::size_t width);
  static BitString zeros(std::size_t length);

  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }

  /// 1-based; throws RangeError outside 1..size().
  std::uint8_t bit(std::size_t i) const;
  /// x(n1:n2), 1-based inclusive; throws RangeError.
  BitString slice(std::size_t n1, std::size_t n2) const;
  /// Prefix x(1:n); n may be 0.
  BitString prefix(std::size_t n) const;

  /// Inverse of from_uint; requires size() <= 64.
  std::uint64_t to_uint() const;

  BitString operator+(const BitString& other) const;
  BitString& append(const BitString& other);

  /// Packs 8 bits per byte, first bit in the most significant position,
  /// last byte zero padded.
  std::vector<std::uint8_t> pack_bytes() const;

  std::string to_string() const;
  const std::vector<std::uint8_t>& bits() const { return bits_; }

  friend bool operator==(const BitString&, const BitString&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

/// Parses '0'/'1' text. Throws ParseError naming the 1-based position of the
/// first other character, or position 0 for empty input.
BitString load_bits(std::string_view text);

}  // namespace twosource
