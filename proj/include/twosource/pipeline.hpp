#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "twosource/bitstring.hpp"
#include "twosource/color_table.hpp"
#include "twosource/regularity.hpp"
#include "twosource/schedule.hpp"
#include "twosource/sources.hpp"

namespace twosource {

struct PipelineConfig {
  SplitParams params;
  /// Cut points and block lengths actually used (capped in toy mode).
  SplitSchedule schedule;
  /// Output length per block, m_i = i^2 unless capped in toy mode.
  std::vector<std::uint64_t> block_m;
  /// sigma / 2 = tau / 4: regularity parameter of every block table.
  Rational regularity_sigma;
  Rational c = 2;
  std::optional<std::uint64_t> toy_max_n;
  std::size_t block_limit = 0;
  std::uint64_t base_seed = 0;
  SearchOptions search;
  std::optional<std::filesystem::path> cache_dir;

  bool toy() const { return toy_max_n.has_value(); }
};

/// Builds the schedule with sigma = tau/2, sigma' = tau/4 for `block_limit`
/// blocks. With toy_max_n set, n_i is capped at toy_max_n and m_i at
/// min(i^2, n_i, max(1, floor(0.99 (tau/4) n_i))).
PipelineConfig plan(const Rational& tau, const BigInt& a, std::size_t block_limit,
                    std::optional<std::uint64_t> toy_max_n = std::nullopt, std::uint64_t base_seed = 0);

/// Seed of block i's table search:
/// at(at(at(base_seed, i), n_i), m_i) with at() the SplitMix64 stream value.
std::uint64_t block_seed(std::uint64_t base_seed, std::size_t i, std::uint64_t n_i, std::uint64_t m_i);

enum class TableKind {
  certified,     // exact-mode pass from the seeded search
  sampled,       // sampled-mode pass from the seeded search (evidence only)
  vacuous,       // c >= 2^m: every table is regular, seeded table used as is
  unattainable,  // no regular table of these sizes exists; seeded table used
};

std::string to_string(TableKind kind);

struct BlockTable {
  std::shared_ptr<const ColorSource> table;
  TableKind kind = TableKind::vacuous;
  std::optional<RegularityReport> report;
  std::uint64_t seed = 0;
  bool from_cache = false;
};

/// Table for block i (1-based). Throws InfeasibleError when the block is too
/// large to search and SearchExhausted (with block index in the message)
/// when no candidate passes.
BlockTable block_table(const PipelineConfig& config, std::size_t i);

/// Cache file name regfn_n<n>_m<m>_s<p>-<q>_c<c>_seed<seed>.txt; a rational
/// p/q is written p-q, an integer as is.
std::string cache_file_name(unsigned n, unsigned m, const Rational& sigma, const Rational& c, std::uint64_t seed);

struct BlockTrace {
  std::size_t index = 0;
  std::uint64_t n = 0;
  std::uint64_t m = 0;
  std::uint64_t m_paper = 0;
  TableKind table_kind = TableKind::vacuous;
  std::string table_fingerprint;
  std::uint64_t table_seed = 0;
  BitString x;
  BitString y;
  BitString z;
  std::vector<std::string> annotations;
};

struct ExtractionTrace {
  std::vector<BlockTrace> blocks;
  std::size_t output_length = 0;
  std::size_t consumed_x = 0;
  std::size_t consumed_y = 0;
  bool toy = false;
  std::vector<std::string> annotations;
};

struct PrefixRequirement {
  std::size_t blocks = 0;
  BigInt prefix_bits;
};

/// Smallest j with m_1 + ... + m_j >= out_len, and t_j. Needs no oracle.
PrefixRequirement required_prefix(const PipelineConfig& config, std::size_t out_len);

/// z_i = E(x_i, y_i); |x_i| = |y_i| = E.n.
BitString extract_block(const ColorSource& table, const BitString& x, const BitString& y);

struct RunResult {
  BitString z;
  ExtractionTrace trace;
};

/// Processes blocks 1..j for the j of required_prefix, reading exactly
/// x(1:t_j) and y(1:t_j).
RunResult run(const PipelineConfig& config, OracleSource& x, OracleSource& y, std::size_t out_len);

nlohmann::json config_to_json(const PipelineConfig& config);
nlohmann::json trace_to_json(const ExtractionTrace& trace);

}  // namespace twosource
