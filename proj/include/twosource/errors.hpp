#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace twosource {

/// Malformed bit text or generator spec.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what), position_(position) {}
  /// 1-based offending position, 0 when not applicable.
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Read or checkpoint beyond the available data.
class RangeError : public std::out_of_range {
 public:
  RangeError(const std::string& what, std::size_t requested, std::size_t available)
      : std::out_of_range(what), requested_(requested), available_(available) {}
  std::size_t requested() const { return requested_; }
  std::size_t available() const { return available_; }

 private:
  std::size_t requested_;
  std::size_t available_;
};

/// A computation refused because it would exceed a configured cost budget,
/// or because the requested sizes are outside what the tool can represent.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace twosource
