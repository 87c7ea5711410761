#include "twosource/estimate.hpp"

#include <cstdio>
#include <stdexcept>

#include <zlib.h>

#include "twosource/errors.hpp"

namespace twosource {

namespace {

std::uint64_t compressed_bytes(const std::vector<std::uint8_t>& data) {
  uLongf dest_len = compressBound(static_cast<uLong>(data.size()));
  std::vector<Bytef> dest(dest_len);
  const int rc = compress2(dest.data(), &dest_len, data.data(), static_cast<uLong>(data.size()), 9);
  if (rc != Z_OK) throw std::runtime_error("zlib compress2 failed with code " + std::to_string(rc));
  return dest_len;
}

unsigned ceil_log2(std::size_t v) {
  unsigned r = 0;
  while ((std::size_t{1} << r) < v) ++r;
  return r;
}

}  // namespace

std::uint64_t compressor_overhead_bits() {
  static const std::uint64_t overhead = 8 * compressed_bytes({});
  return overhead;
}

std::string compressor_version() { return zlibVersion(); }

Khat khat(const BitString& bits) {
  if (bits.empty()) throw std::invalid_argument("khat: input must be nonempty");
  Khat k;
  k.raw_bits = 8 * compressed_bytes(bits.pack_bytes());
  k.corrected_bits = k.raw_bits - compressor_overhead_bits();
  return k;
}

std::uint64_t khat_bits(const BitString& bits) { return khat(bits).corrected_bits; }

RateEstimate rate_profile(const BitString& bits, const std::vector<std::size_t>& checkpoints) {
  RateEstimate out;
  std::size_t previous = 0;
  for (auto len : checkpoints) {
    if (len < previous) throw std::invalid_argument("rate_profile: checkpoints must be sorted");
    if (len == 0 || len > bits.size()) {
      throw RangeError("checkpoint " + std::to_string(len) + " outside 1.." + std::to_string(bits.size()), len,
                       bits.size());
    }
    previous = len;
    const Khat k = khat(bits.prefix(len));
    out.checkpoints.push_back(
        {len, k.corrected_bits, k.raw_bits, static_cast<double>(k.corrected_bits) / static_cast<double>(len)});
  }
  return out;
}

DependencyEstimate dependency_profile(const BitString& x, const BitString& y, std::size_t n, std::size_t m) {
  if (n < 1 || n > x.size()) throw RangeError("dependency: n outside 1..|x|", n, x.size());
  if (m < 1 || m > y.size()) throw RangeError("dependency: m outside 1..|y|", m, y.size());
  const BitString xp = x.prefix(n);
  const BitString yp = y.prefix(m);
  DependencyEstimate d;
  d.n = n;
  d.m = m;
  d.khat_x = khat_bits(xp);
  d.khat_y = khat_bits(yp);
  // y starts on a byte boundary; otherwise a shifted copy of x shares no
  // byte-level matches with x.
  d.khat_xy = khat_bits(xp + BitString::zeros((8 - n % 8) % 8) + yp);
  d.value = static_cast<std::int64_t>(d.khat_x + d.khat_y) - static_cast<std::int64_t>(d.khat_xy);
  return d;
}

std::int64_t default_dependency_threshold(std::size_t n, std::size_t m) {
  return 8 * static_cast<std::int64_t>(ceil_log2(n) + ceil_log2(m));
}

std::string rate_csv(const RateEstimate& r) {
  std::string out = "prefix_len,khat_bits,ratio\n";
  char buf[96];
  for (const auto& c : r.checkpoints) {
    std::snprintf(buf, sizeof buf, "%zu,%llu,%.6f\n", c.prefix_len, static_cast<unsigned long long>(c.khat_bits),
                  c.ratio);
    out += buf;
  }
  return out;
}

std::string dependency_csv(const std::vector<DependencyEstimate>& rows) {
  std::string out = "n,m,khat_x,khat_y,khat_xy,value\n";
  char buf[160];
  for (const auto& d : rows) {
    std::snprintf(buf, sizeof buf, "%zu,%zu,%llu,%llu,%llu,%lld\n", d.n, d.m,
                  static_cast<unsigned long long>(d.khat_x), static_cast<unsigned long long>(d.khat_y),
                  static_cast<unsigned long long>(d.khat_xy), static_cast<long long>(d.value));
    out += buf;
  }
  return out;
}

}  // namespace twosource
