#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "twosource/bitstring.hpp"

namespace twosource {

// A function f: {0,1}^n x {0,1}^n -> {0,1}^m viewed as an N x N grid of
// colors, N = 2^n. Row u and column v are the integer indices of the input
// strings with bit j of the string at weight 2^(j-1), so numeric order is
// colexicographic order on strings.
class ColorSource {
 public:
  virtual ~ColorSource() = default;
  virtual unsigned n() const = 0;
  virtual unsigned m() const = 0;
  virtual std::uint64_t color(std::uint64_t u, std::uint64_t v) const = 0;

  std::uint64_t side() const { return std::uint64_t{1} << n(); }
  /// f(x, y) as an m-bit string; |x| = |y| = n, else std::invalid_argument.
  BitString apply(const BitString& x, const BitString& y) const;
  /// Identity string of the table, used to build its fingerprint.
  virtual std::string descriptor() const = 0;
  /// FNV-1a 64 of descriptor(), 16 hex digits.
  std::string fingerprint() const;
};

/// Explicit table, at most 2^24 cells and 32-bit colors.
class ColorTable final : public ColorSource {
 public:
  static constexpr unsigned kMaxN = 12;
  static constexpr unsigned kMaxM = 32;

  ColorTable(unsigned n, unsigned m, std::vector<std::uint32_t> cells);

  static ColorTable from_function(unsigned n, unsigned m,
                                  const std::function<std::uint64_t(std::uint64_t, std::uint64_t)>& f);
  static ColorTable constant(unsigned n, unsigned m, std::uint32_t color);

  unsigned n() const override { return n_; }
  unsigned m() const override { return m_; }
  std::uint64_t color(std::uint64_t u, std::uint64_t v) const override {
    return cells_[(u << n_) | v];
  }
  std::uint32_t at(std::uint64_t u, std::uint64_t v) const { return cells_[(u << n_) | v]; }
  const std::vector<std::uint32_t>& cells() const { return cells_; }

  /// Content hash over the serialized file text.
  std::string descriptor() const override;
  /// `regfn n=<n> m=<m>` then one m-bit color string per line, rows u
  /// outer, columns v inner.
  std::string serialize() const;

  friend bool operator==(const ColorTable& a, const ColorTable& b) {
    return a.n_ == b.n_ && a.m_ == b.m_ && a.cells_ == b.cells_;
  }

 private:
  unsigned n_;
  unsigned m_;
  std::vector<std::uint32_t> cells_;
};

// The seeded random table without materializing it: cell (u, v) is the low m
// bits of SplitMix64 output number u*N + v of the stream seeded with `seed`.
// random_table() materializes exactly these values.
class RandomTableView final : public ColorSource {
 public:
  static constexpr unsigned kMaxN = 32;
  static constexpr unsigned kMaxM = 64;

  RandomTableView(unsigned n, unsigned m, std::uint64_t seed);

  unsigned n() const override { return n_; }
  unsigned m() const override { return m_; }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t color(std::uint64_t u, std::uint64_t v) const override;
  std::string descriptor() const override;

 private:
  unsigned n_;
  unsigned m_;
  std::uint64_t seed_;
  std::uint64_t mask_;
};

ColorTable random_table(unsigned n, unsigned m, std::uint64_t seed);

/// FNV-1a 64 of `text` as 16 lowercase hex digits; the fingerprint of every
/// table and input file.
std::string fingerprint_text(std::string_view text);

ColorTable parse_table(const std::string& text);
ColorTable read_table_file(const std::filesystem::path& path);
void write_table_file(const std::filesystem::path& path, const ColorTable& table);

}  // namespace twosource
