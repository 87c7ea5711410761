#include "twosource/sources.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "twosource/errors.hpp"
#include "twosource/splitmix.hpp"

namespace twosource {

BitString zero_dilute(const BitString& x, std::size_t period) {
  if (period < 2) throw std::invalid_argument("zero_dilute: period must be >= 2");
  std::vector<std::uint8_t> out(x.size() * period, 0);
  const auto& bits = x.bits();
  for (std::size_t j = 0; j < bits.size(); ++j) out[j * period] = bits[j];
  return BitString(std::move(out));
}

BitString seeded_source(std::uint64_t seed, std::size_t length) {
  std::vector<std::uint8_t> out(length);
  SplitMix64 rng(seed);
  std::uint64_t word = 0;
  for (std::size_t t = 0; t < length; ++t) {
    if (t % 64 == 0) word = rng.next();
    out[t] = static_cast<std::uint8_t>((word >> (t % 64)) & 1U);
  }
  return BitString(std::move(out));
}

BitString OracleSource::read(std::size_t n1, std::size_t n2) {
  if (n1 < 1 || n1 > n2 || n2 > data_.size()) {
    throw RangeError("oracle read (" + std::to_string(n1) + ":" + std::to_string(n2) +
                         ") needs " + std::to_string(n2) + " bits, source has " +
                         std::to_string(data_.size()),
                     n2, data_.size());
  }
  if (n2 > queries_served_) queries_served_ = n2;
  return data_.slice(n1, n2);
}

BitString read_bits_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open bit file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  if (!text.empty() && text.back() == '\n') text.pop_back();
  if (!text.empty() && text.back() == '\r') text.pop_back();
  return load_bits(text);
}

void write_bits_file(const std::filesystem::path& path, const BitString& bits) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write bit file " + path.string());
  out << bits.to_string() << '\n';
}

namespace {

std::uint64_t parse_uint(std::string_view text, std::string_view spec, std::size_t offset) {
  std::uint64_t value = 0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc() || ptr != last) {
    throw ParseError("generator spec '" + std::string(spec) + "': expected integer at position " +
                         std::to_string(offset + 1),
                     offset + 1);
  }
  return value;
}

bool consume(std::string_view& s, std::string_view token) {
  if (s.substr(0, token.size()) != token) return false;
  s.remove_prefix(token.size());
  return true;
}

}  // namespace

BitString generate_from_spec(std::string_view spec) {
  std::vector<std::string_view> stages;
  std::size_t start = 0;
  while (true) {
    const auto bar = spec.find('|', start);
    stages.push_back(spec.substr(start, bar == std::string_view::npos ? bar : bar - start));
    if (bar == std::string_view::npos) break;
    start = bar + 1;
  }

  std::string_view head = stages.front();
  if (!consume(head, "seed:")) throw ParseError("generator spec must start with 'seed:'", 1);
  const auto comma = head.find(",len:");
  if (comma == std::string_view::npos) {
    throw ParseError("generator spec '" + std::string(spec) + "': missing ',len:'", 1);
  }
  const auto seed = parse_uint(head.substr(0, comma), spec, 5);
  const auto len = parse_uint(head.substr(comma + 5), spec, 5 + comma + 5);
  BitString bits = seeded_source(seed, static_cast<std::size_t>(len));

  std::size_t offset = stages.front().size() + 1;
  for (std::size_t s = 1; s < stages.size(); ++s) {
    std::string_view stage = stages[s];
    if (!consume(stage, "dilute:")) {
      throw ParseError("generator spec '" + std::string(spec) + "': unknown stage at position " +
                           std::to_string(offset + 1),
                       offset + 1);
    }
    const auto period = parse_uint(stage, spec, offset + 7);
    if (period < 2) throw ParseError("dilute period must be >= 2", offset + 8);
    bits = zero_dilute(bits, static_cast<std::size_t>(period));
    offset += stages[s].size() + 1;
  }
  return bits;
}

}  // namespace twosource
