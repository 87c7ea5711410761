#include "twosource/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "twosource/errors.hpp"
#include "twosource/splitmix.hpp"

namespace twosource {

namespace {

std::uint64_t to_u64(const BigInt& v) {
  if (v < 0 || v > BigInt(UINT64_MAX)) throw InfeasibleError("value " + v.str() + " exceeds 64 bits");
  return v.convert_to<std::uint64_t>();
}

std::string rational_token(const Rational& r) {
  const BigInt p = numerator(r);
  const BigInt q = denominator(r);
  return q == 1 ? p.str() : p.str() + "-" + q.str();
}

struct CacheEntry {
  ColorTable table;
  RegularityReport report;
};

std::optional<CacheEntry> load_cached(const std::filesystem::path& table_path) {
  auto sidecar = table_path;
  sidecar.replace_extension(".json");
  if (!std::filesystem::exists(table_path) || !std::filesystem::exists(sidecar)) return std::nullopt;
  ColorTable table = read_table_file(table_path);
  std::ifstream in(sidecar);
  const auto j = nlohmann::json::parse(in);
  if (j.at("fingerprint").get<std::string>() != table.fingerprint()) return std::nullopt;
  const auto& r = j.at("report");
  RegularityReport report;
  report.pass = r.at("verdict") == "pass";
  report.mode = r.at("mode") == "exact" ? CheckMode::exact : CheckMode::sampled;
  report.n = r.at("n");
  report.m = r.at("m");
  report.sigma = parse_rational(r.at("sigma").get<std::string>());
  report.c = parse_rational(r.at("c").get<std::string>());
  report.k1 = r.at("k1");
  report.k2 = r.at("k2");
  report.max_load_ratio = parse_rational(r.at("max_load_ratio").get<std::string>());
  report.rectangles_checked = r.at("rectangles_checked");
  report.exhaustive = r.value("exhaustive", false);
  if (!r.at("witness").is_null()) {
    const auto& w = r.at("witness");
    report.witness = Witness{w.at("rows").get<Subset>(), w.at("cols").get<Subset>(), w.at("color"), w.at("load")};
  }
  return CacheEntry{std::move(table), std::move(report)};
}

void store_cached(const std::filesystem::path& table_path, const FoundTable& found) {
  std::filesystem::create_directories(table_path.parent_path());
  write_table_file(table_path, found.table);
  auto sidecar = table_path;
  sidecar.replace_extension(".json");
  nlohmann::json j;
  j["fingerprint"] = found.table.fingerprint();
  j["candidate_seed"] = found.candidate_seed;
  j["report"] = report_to_json(found.report);
  std::ofstream(sidecar) << j.dump(2) << '\n';
}

}  // namespace

PipelineConfig plan(const Rational& tau, const BigInt& a, std::size_t block_limit,
                    std::optional<std::uint64_t> toy_max_n, std::uint64_t base_seed) {
  if (block_limit < 1) throw std::invalid_argument("block_limit must be >= 1");
  PipelineConfig config;
  config.params = derive_params(tau, a);
  config.regularity_sigma = config.params.sigma / 2;
  config.toy_max_n = toy_max_n;
  config.block_limit = block_limit;
  config.base_seed = base_seed;
  config.schedule = toy_max_n ? capped_cut_points(config.params, block_limit, BigInt(*toy_max_n))
                              : cut_points(config.params, block_limit);
  for (std::size_t i = 1; i <= block_limit; ++i) {
    const BigInt paper_m = config.schedule.m[i - 1];
    if (!toy_max_n) {
      config.block_m.push_back(to_u64(paper_m));
      continue;
    }
    const BigInt n_i = config.schedule.n[i - 1];
    const Rational lemma = Rational(99, 100) * config.regularity_sigma * n_i;
    const BigInt lemma_cap = std::max(BigInt(1), BigInt(numerator(lemma) / denominator(lemma)));
    config.block_m.push_back(to_u64(std::min({paper_m, n_i, lemma_cap})));
  }
  return config;
}

std::uint64_t block_seed(std::uint64_t base_seed, std::size_t i, std::uint64_t n_i, std::uint64_t m_i) {
  return SplitMix64::at(SplitMix64::at(SplitMix64::at(base_seed, i), n_i), m_i);
}

std::string to_string(TableKind kind) {
  switch (kind) {
    case TableKind::certified: return "certified";
    case TableKind::sampled: return "sampled";
    case TableKind::vacuous: return "vacuous";
    case TableKind::unattainable: return "unattainable";
  }
  return "unknown";
}

std::string cache_file_name(unsigned n, unsigned m, const Rational& sigma, const Rational& c, std::uint64_t seed) {
  return "regfn_n" + std::to_string(n) + "_m" + std::to_string(m) + "_s" + rational_token(sigma) + "_c" +
         rational_token(c) + "_seed" + std::to_string(seed) + ".txt";
}

BlockTable block_table(const PipelineConfig& config, std::size_t i) {
  if (i < 1 || i > config.schedule.blocks()) throw std::invalid_argument("block index outside schedule");
  const BigInt n_big = config.schedule.n[i - 1];
  const std::uint64_t m64 = config.block_m[i - 1];
  const std::string where = "block " + std::to_string(i) + " (n=" + n_big.str() + ", m=" + std::to_string(m64) + ")";
  if (n_big > RandomTableView::kMaxN) {
    throw InfeasibleError(where + ": input length exceeds the 32-bit table limit; use a toy cap (--toy-max-n)");
  }
  if (m64 > RandomTableView::kMaxM) throw InfeasibleError(where + ": output length exceeds 64 bits");
  const auto n = static_cast<unsigned>(n_big);
  const auto m = static_cast<unsigned>(m64);

  BlockTable out;
  out.seed = block_seed(config.base_seed, i, n, m);
  if (config.c >= Rational(BigInt(1) << m)) {
    out.kind = TableKind::vacuous;
    out.table = std::make_shared<RandomTableView>(n, m, out.seed);
    return out;
  }
  if (!regularity_attainable(n, m, config.regularity_sigma, config.c)) {
    out.kind = TableKind::unattainable;
    out.table = std::make_shared<RandomTableView>(n, m, out.seed);
    return out;
  }
  if (n > ColorTable::kMaxN || m > ColorTable::kMaxM) {
    throw InfeasibleError(where + ": exceeds regular-table search feasibility; use a toy cap (--toy-max-n)");
  }

  std::optional<std::filesystem::path> cache_path;
  if (config.cache_dir) {
    cache_path = *config.cache_dir / cache_file_name(n, m, config.regularity_sigma, config.c, out.seed);
    if (auto hit = load_cached(*cache_path)) {
      out.kind = hit->report.mode == CheckMode::exact ? TableKind::certified : TableKind::sampled;
      out.report = std::move(hit->report);
      out.table = std::make_shared<ColorTable>(std::move(hit->table));
      out.from_cache = true;
      return out;
    }
  }
  try {
    FoundTable found = find_regular(n, m, config.regularity_sigma, config.c, out.seed, config.search);
    if (cache_path) store_cached(*cache_path, found);
    out.kind = found.report.mode == CheckMode::exact ? TableKind::certified : TableKind::sampled;
    out.report = std::move(found.report);
    out.table = std::make_shared<ColorTable>(std::move(found.table));
  } catch (const SearchExhausted& e) {
    throw SearchExhausted(where + ": " + e.what(), e.best());
  }
  return out;
}

PrefixRequirement required_prefix(const PipelineConfig& config, std::size_t out_len) {
  if (out_len < 1) throw std::invalid_argument("out_len must be >= 1");
  std::uint64_t produced = 0;
  for (std::size_t j = 1; j <= config.block_m.size(); ++j) {
    produced += config.block_m[j - 1];
    if (produced >= out_len) return {j, config.schedule.t[j]};
  }
  throw InfeasibleError("out_len " + std::to_string(out_len) + " needs more than the planned " +
                        std::to_string(config.block_m.size()) + " blocks");
}

BitString extract_block(const ColorSource& table, const BitString& x, const BitString& y) {
  return table.apply(x, y);
}

RunResult run(const PipelineConfig& config, OracleSource& x, OracleSource& y, std::size_t out_len) {
  const PrefixRequirement need = required_prefix(config, out_len);
  if (need.prefix_bits > BigInt(x.available()) || need.prefix_bits > BigInt(y.available())) {
    const std::size_t shortest = std::min(x.available(), y.available());
    throw RangeError("oracles must serve t_" + std::to_string(need.blocks) + " = " + need.prefix_bits.str() +
                         " bits for " + std::to_string(out_len) + " output bits; shortest source has " +
                         std::to_string(shortest),
                     need.prefix_bits > BigInt(SIZE_MAX) ? SIZE_MAX : need.prefix_bits.convert_to<std::size_t>(),
                     shortest);
  }

  RunResult result;
  ExtractionTrace& trace = result.trace;
  trace.toy = config.toy();
  if (config.toy()) {
    trace.annotations.push_back("off-paper: toy mode caps block lengths at " + std::to_string(*config.toy_max_n) +
                                " bits and output lengths by the existence condition; the splitting premises "
                                "do not hold");
  }

  BitString z;
  for (std::size_t i = 1; i <= need.blocks; ++i) {
    const auto lo = config.schedule.t[i - 1].convert_to<std::size_t>();
    const auto hi = config.schedule.t[i].convert_to<std::size_t>();
    const BlockTable table = block_table(config, i);

    BlockTrace block;
    block.index = i;
    block.n = hi - lo;
    block.m = config.block_m[i - 1];
    block.m_paper = to_u64(config.schedule.m[i - 1]);
    block.table_kind = table.kind;
    block.table_fingerprint = table.table->fingerprint();
    block.table_seed = table.seed;
    block.x = x.read(lo + 1, hi);
    block.y = y.read(lo + 1, hi);
    block.z = extract_block(*table.table, block.x, block.y);
    if (block.m != block.m_paper) {
      block.annotations.push_back("off-paper: output length capped from " + std::to_string(block.m_paper) + " to " +
                                  std::to_string(block.m));
    }
    if (table.kind == TableKind::unattainable) {
      block.annotations.push_back("no (" + format_rational(config.regularity_sigma) + ", " +
                                  format_rational(config.c) +
                                  ")-regular table exists at these sizes; seeded table used without certificate");
    } else if (table.kind == TableKind::sampled) {
      block.annotations.push_back("table regularity is sampled evidence, not a certificate");
    }
    z.append(block.z);
    trace.blocks.push_back(std::move(block));
  }

  trace.consumed_x = x.queries_served();
  trace.consumed_y = y.queries_served();
  result.z = z.prefix(out_len);
  trace.output_length = out_len;
  return result;
}

nlohmann::json config_to_json(const PipelineConfig& config) {
  nlohmann::json j;
  j["tau"] = format_rational(config.params.tau);
  j["a"] = config.params.a.str();
  j["sigma"] = format_rational(config.params.sigma);
  j["sigma_prime"] = format_rational(config.params.sigma_prime);
  j["b"] = config.params.b.str();
  j["regularity_sigma"] = format_rational(config.regularity_sigma);
  j["c"] = format_rational(config.c);
  j["toy_max_n"] = config.toy_max_n ? nlohmann::json(*config.toy_max_n) : nlohmann::json(nullptr);
  j["block_limit"] = config.block_limit;
  j["base_seed"] = config.base_seed;
  j["search_budget"] = config.search.budget;
  j["exact_budget"] = config.search.check.exact_counts;
  j["sampled_trials"] = config.search.sampled_trials;
  return j;
}

nlohmann::json trace_to_json(const ExtractionTrace& trace) {
  nlohmann::json blocks = nlohmann::json::array();
  for (const auto& b : trace.blocks) {
    blocks.push_back({{"i", b.index},
                      {"n", b.n},
                      {"m", b.m},
                      {"m_paper", b.m_paper},
                      {"table_kind", to_string(b.table_kind)},
                      {"table_fingerprint", b.table_fingerprint},
                      {"table_seed", b.table_seed},
                      {"x", b.x.to_string()},
                      {"y", b.y.to_string()},
                      {"z", b.z.to_string()},
                      {"annotations", b.annotations}});
  }
  return {{"blocks", blocks},
          {"output_length", trace.output_length},
          {"consumed_x", trace.consumed_x},
          {"consumed_y", trace.consumed_y},
          {"toy", trace.toy},
          {"annotations", trace.annotations}};
}

}  // namespace twosource
