#include "twosource/color_table.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "twosource/errors.hpp"
#include "twosource/splitmix.hpp"

namespace twosource {

namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t low_mask(unsigned m) { return m >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1; }

}  // namespace

BitString ColorSource::apply(const BitString& x, const BitString& y) const {
  if (x.size() != n() || y.size() != n()) {
    throw std::invalid_argument("table input length mismatch: table n=" + std::to_string(n()) +
                                ", got |x|=" + std::to_string(x.size()) +
                                ", |y|=" + std::to_string(y.size()));
  }
  return BitString::from_uint(color(x.to_uint(), y.to_uint()), m());
}

std::string fingerprint_text(std::string_view text) { return hex64(fnv1a(text)); }

std::string ColorSource::fingerprint() const { return fingerprint_text(descriptor()); }

ColorTable::ColorTable(unsigned n, unsigned m, std::vector<std::uint32_t> cells)
    : n_(n), m_(m), cells_(std::move(cells)) {
  if (n < 1 || n > kMaxN) throw InfeasibleError("explicit table needs 1 <= n <= 12");
  if (m < 1 || m > kMaxM) throw InfeasibleError("explicit table needs 1 <= m <= 32");
  if (cells_.size() != (std::size_t{1} << (2 * n))) {
    throw std::invalid_argument("table must have exactly 2^(2n) cells");
  }
  const auto mask = low_mask(m);
  for (auto c : cells_) {
    if (c > mask) throw std::invalid_argument("table color exceeds 2^m - 1");
  }
}

ColorTable ColorTable::from_function(unsigned n, unsigned m,
                                     const std::function<std::uint64_t(std::uint64_t, std::uint64_t)>& f) {
  if (n < 1 || n > kMaxN) throw InfeasibleError("explicit table needs 1 <= n <= 12");
  const std::uint64_t side = std::uint64_t{1} << n;
  std::vector<std::uint32_t> cells(side * side);
  for (std::uint64_t u = 0; u < side; ++u) {
    for (std::uint64_t v = 0; v < side; ++v) cells[(u << n) | v] = static_cast<std::uint32_t>(f(u, v));
  }
  return ColorTable(n, m, std::move(cells));
}

ColorTable ColorTable::constant(unsigned n, unsigned m, std::uint32_t color) {
  return from_function(n, m, [color](std::uint64_t, std::uint64_t) { return color; });
}

std::string ColorTable::serialize() const {
  std::string out = "regfn n=" + std::to_string(n_) + " m=" + std::to_string(m_) + "\n";
  out.reserve(out.size() + cells_.size() * (m_ + 1));
  for (auto c : cells_) {
    for (unsigned j = 0; j < m_; ++j) out.push_back(((c >> j) & 1U) ? '1' : '0');
    out.push_back('\n');
  }
  return out;
}

std::string ColorTable::descriptor() const { return serialize(); }

RandomTableView::RandomTableView(unsigned n, unsigned m, std::uint64_t seed)
    : n_(n), m_(m), seed_(seed), mask_(low_mask(m)) {
  if (n < 1 || n > kMaxN) throw InfeasibleError("random table needs 1 <= n <= 32, got " + std::to_string(n));
  if (m < 1 || m > kMaxM) throw InfeasibleError("random table needs 1 <= m <= 64, got " + std::to_string(m));
}

std::uint64_t RandomTableView::color(std::uint64_t u, std::uint64_t v) const {
  return SplitMix64::at(seed_, (u << n_) | v) & mask_;
}

std::string RandomTableView::descriptor() const {
  return "splitmix64-table n=" + std::to_string(n_) + " m=" + std::to_string(m_) +
         " seed=" + std::to_string(seed_);
}

ColorTable random_table(unsigned n, unsigned m, std::uint64_t seed) {
  if (n < 1 || n > ColorTable::kMaxN) throw InfeasibleError("explicit table needs 1 <= n <= 12");
  if (m < 1 || m > ColorTable::kMaxM) throw InfeasibleError("explicit table needs 1 <= m <= 32");
  const std::size_t cells = std::size_t{1} << (2 * n);
  const auto mask = low_mask(m);
  std::vector<std::uint32_t> out(cells);
  SplitMix64 rng(seed);
  for (auto& c : out) c = static_cast<std::uint32_t>(rng.next() & mask);
  return ColorTable(n, m, std::move(out));
}

ColorTable parse_table(const std::string& text) {
  std::istringstream in(text);
  std::string header;
  std::getline(in, header);
  unsigned n = 0;
  unsigned m = 0;
  if (std::sscanf(header.c_str(), "regfn n=%u m=%u", &n, &m) != 2) {
    throw ParseError("table header must be 'regfn n=<int> m=<int>'", 1);
  }
  if (n < 1 || n > ColorTable::kMaxN || m < 1 || m > ColorTable::kMaxM) {
    throw ParseError("table header sizes out of range: " + header, 1);
  }
  const std::size_t cells = std::size_t{1} << (2 * n);
  std::vector<std::uint32_t> out(cells);
  std::string line;
  for (std::size_t j = 0; j < cells; ++j) {
    if (!std::getline(in, line)) {
      throw ParseError("table truncated after " + std::to_string(j) + " cells", j + 2);
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.size() != m) {
      throw ParseError("table line " + std::to_string(j + 2) + " is not an m-bit string", j + 2);
    }
    std::uint32_t c = 0;
    for (unsigned b = 0; b < m; ++b) {
      if (line[b] == '1') {
        c |= 1U << b;
      } else if (line[b] != '0') {
        throw ParseError("table line " + std::to_string(j + 2) + " has a non-binary character", j + 2);
      }
    }
    out[j] = c;
  }
  return ColorTable(n, m, std::move(out));
}

ColorTable read_table_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open table file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_table(ss.str());
}

void write_table_file(const std::filesystem::path& path, const ColorTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write table file " + path.string());
  out << table.serialize();
}

}  // namespace twosource
