#include "twosource/bitstring.hpp"

#include <stdexcept>

#include "twosource/errors.hpp"

namespace twosource {

BitString::BitString(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (auto& b : bits_) {
    if (b > 1) throw std::invalid_argument("BitString: element is not 0 or 1");
  }
}

BitString BitString::from_uint(std::uint64_t value, std::size_t width) {
  if (width > 64) throw std::invalid_argument("BitString::from_uint: width > 64");
  std::vector<std::uint8_t> bits(width);
  for (std::size_t j = 0; j < width; ++j) bits[j] = (value >> j) & 1U;
  BitString out;
  out.bits_ = std::move(bits);
  return out;
}

BitString BitString::zeros(std::size_t length) {
  BitString out;
  out.bits_.assign(length, 0);
  return out;
}

std::uint8_t BitString::bit(std::size_t i) const {
  if (i < 1 || i > bits_.size()) {
    throw RangeError("bit index " + std::to_string(i) + " outside 1.." +
                         std::to_string(bits_.size()),
                     i, bits_.size());
  }
  return bits_[i - 1];
}

BitString BitString::slice(std::size_t n1, std::size_t n2) const {
  if (n1 < 1 || n1 > n2 || n2 > bits_.size()) {
    throw RangeError("slice (" + std::to_string(n1) + ":" + std::to_string(n2) +
                         ") outside available length " + std::to_string(bits_.size()),
                     n2, bits_.size());
  }
  BitString out;
  out.bits_.assign(bits_.begin() + static_cast<std::ptrdiff_t>(n1 - 1),
                   bits_.begin() + static_cast<std::ptrdiff_t>(n2));
  return out;
}

BitString BitString::prefix(std::size_t n) const {
  if (n == 0) return {};
  return slice(1, n);
}

std::uint64_t BitString::to_uint() const {
  if (bits_.size() > 64) throw std::invalid_argument("BitString::to_uint: longer than 64 bits");
  std::uint64_t v = 0;
  for (std::size_t j = 0; j < bits_.size(); ++j) v |= std::uint64_t{bits_[j]} << j;
  return v;
}

BitString BitString::operator+(const BitString& other) const {
  BitString out = *this;
  out.append(other);
  return out;
}

BitString& BitString::append(const BitString& other) {
  bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
  return *this;
}

std::vector<std::uint8_t> BitString::pack_bytes() const {
  std::vector<std::uint8_t> out((bits_.size() + 7) / 8, 0);
  for (std::size_t j = 0; j < bits_.size(); ++j) {
    if (bits_[j]) out[j / 8] |= static_cast<std::uint8_t>(0x80U >> (j % 8));
  }
  return out;
}

std::string BitString::to_string() const {
  std::string s(bits_.size(), '0');
  for (std::size_t j = 0; j < bits_.size(); ++j) {
    if (bits_[j]) s[j] = '1';
  }
  return s;
}

BitString load_bits(std::string_view text) {
  if (text.empty()) throw ParseError("empty bit string", 0);
  std::vector<std::uint8_t> bits(text.size());
  for (std::size_t j = 0; j < text.size(); ++j) {
    const char c = text[j];
    if (c != '0' && c != '1') {
      throw ParseError("invalid character at position " + std::to_string(j + 1), j + 1);
    }
    bits[j] = static_cast<std::uint8_t>(c - '0');
  }
  return BitString(std::move(bits));
}

}  // namespace twosource
