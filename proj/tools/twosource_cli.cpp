#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "twosource/color_table.hpp"
#include "twosource/errors.hpp"
#include "twosource/estimate.hpp"
#include "twosource/pipeline.hpp"
#include "twosource/regularity.hpp"
#include "twosource/schedule.hpp"
#include "twosource/sources.hpp"

#ifndef TWOSOURCE_VERSION
#define TWOSOURCE_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using nlohmann::json;
using namespace twosource;

namespace {

enum Exit { kOk = 0, kUsage = 2, kInfeasible = 3, kData = 4 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flag values are parsed here so that malformed numbers surface as usage
// errors rather than data errors.
Rational flag_rational(const std::string& name, const std::string& text) {
  try {
    return parse_rational(text);
  } catch (const std::exception& e) {
    throw UsageError("--" + name + ": " + e.what());
  }
}

BigInt flag_integer(const std::string& name, const std::string& text) {
  const Rational r = flag_rational(name, text);
  if (denominator(r) != 1) throw UsageError("--" + name + " must be an integer");
  return numerator(r);
}

std::vector<std::size_t> flag_lengths(const std::string& name, const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      const auto v = std::stoull(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw UsageError("--" + name + ": not a length list: " + text);
    }
  }
  return out;
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Run manifest. Everything except "wall_clock" is a function of the flags and
// input contents.
class Manifest {
 public:
  Manifest(std::string command, const std::vector<std::string>& argv)
      : start_(std::chrono::steady_clock::now()), started_(utc_now()) {
    doc_["tool"] = "twosource";
    doc_["tool_version"] = TWOSOURCE_VERSION;
    doc_["compressor"] = {{"name", "zlib"}, {"version", compressor_version()}, {"level", 9}};
    doc_["command"] = std::move(command);
    doc_["argv"] = argv;
    doc_["params"] = json::object();
    doc_["seeds"] = json::object();
    doc_["inputs"] = json::array();
    doc_["outputs"] = json::object();
  }

  json& operator[](const char* key) { return doc_[key]; }

  void input(const std::string& name, const std::string& origin, const BitString& bits) {
    doc_["inputs"].push_back({{"name", name},
                              {"origin", origin},
                              {"length", bits.size()},
                              {"fingerprint", fingerprint_text(bits.to_string())}});
  }

  void output(const std::string& name, const fs::path& path) { doc_["outputs"][name] = path.string(); }

  void emit(const std::optional<fs::path>& json_out) {
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    doc_["wall_clock"] = {{"started_utc", started_}, {"elapsed_seconds", elapsed}};
    const std::string text = doc_.dump(2) + "\n";
    if (json_out) {
      write_text(*json_out, text);
    } else {
      std::cout << text;
    }
  }

  static void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
  }

 private:
  std::chrono::steady_clock::time_point start_;
  std::string started_;
  json doc_;
};

struct SourceFlags {
  std::string file;
  std::string gen;
};

void add_source_flags(CLI::App* cmd, const std::string& name, SourceFlags& flags) {
  auto* f = cmd->add_option("--" + name + "-file", flags.file, "bit file ('0'/'1' text) for source " + name);
  auto* g = cmd->add_option("--" + name + "-gen", flags.gen,
                            "generator spec for source " + name + ", e.g. seed:3,len:1024|dilute:2");
  f->excludes(g);
}

std::pair<BitString, std::string> load_source(const std::string& name, const SourceFlags& flags) {
  if (!flags.file.empty()) return {read_bits_file(flags.file), "file:" + flags.file};
  if (!flags.gen.empty()) {
    try {
      return {generate_from_spec(flags.gen), "gen:" + flags.gen};
    } catch (const std::exception& e) {
      throw UsageError("--" + name + "-gen: " + e.what());
    }
  }
  throw UsageError("one of --" + name + "-file or --" + name + "-gen is required");
}

Rational checked_tau(const std::string& text) {
  const Rational tau = flag_rational("tau", text);
  if (tau <= 0 || tau > 1) throw UsageError("--tau must satisfy 0 < tau <= 1, got " + text);
  return tau;
}

struct Common {
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> budget;
  std::optional<std::string> json_out;
  std::optional<std::uint64_t> toy_max_n;
  std::optional<std::string> cache_dir;
  std::vector<std::string> argv;

  std::optional<fs::path> json_path() const {
    return json_out ? std::optional<fs::path>(*json_out) : std::nullopt;
  }
};

void add_seed(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "seed for every random choice (default 0)");
}
void add_budget(CLI::App* cmd, Common& c, const std::string& what) { cmd->add_option("--budget", c.budget, what); }
void add_json_out(CLI::App* cmd, Common& c) {
  cmd->add_option("--json-out", c.json_out, "write the JSON manifest here instead of stdout");
}
void add_toy(CLI::App* cmd, Common& c) {
  cmd->add_option("--toy-max-n", c.toy_max_n, "off-paper toy mode: cap every block length at this many bits")
      ->check(CLI::Range(std::uint64_t{1}, std::uint64_t{32}));
}

// ---------------------------------------------------------------- schedule

struct ScheduleArgs {
  std::string tau;
  std::string a = "2";
  std::size_t count = 10;
};

int cmd_schedule(const ScheduleArgs& args, const Common& common) {
  const Rational tau = checked_tau(args.tau);
  const BigInt a = flag_integer("a", args.a);
  if (a < 1) throw UsageError("--a must be >= 1");
  const SplitParams params = derive_params(tau, a);
  const SplitSchedule s = common.toy_max_n ? capped_cut_points(params, args.count, BigInt(*common.toy_max_n))
                                           : cut_points(params, args.count);
  Manifest m("schedule", common.argv);
  m["params"] = {{"tau", format_rational(tau)},
                 {"a", a.str()},
                 {"count", args.count},
                 {"toy_max_n", common.toy_max_n ? json(*common.toy_max_n) : json(nullptr)}};
  m["schedule"] = schedule_to_json(s);
  m.emit(common.json_path());
  return kOk;
}

// ----------------------------------------------------------- find-regular

struct FindArgs {
  unsigned n = 0;
  unsigned m = 0;
  std::string sigma;
  std::string c = "2";
  std::uint64_t trials = 2000;
  double exact_budget = 1e9;
  std::uint64_t measure = 0;
  std::optional<std::string> out;
};

json search_params(const FindArgs& args, const Rational& sigma, const Rational& c, const SearchOptions& o) {
  return {{"n", args.n},          {"m", args.m},
          {"sigma", format_rational(sigma)}, {"c", format_rational(c)},
          {"budget", o.budget},   {"sampled_trials", o.sampled_trials},
          {"exact_budget", o.check.exact_counts}};
}

int cmd_find_regular(const FindArgs& args, const Common& common) {
  const Rational sigma = flag_rational("sigma", args.sigma);
  const Rational c = flag_rational("c", args.c);
  try {
    make_regularity_params(args.n, args.m, sigma, c);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  SearchOptions options;
  if (common.budget) options.budget = *common.budget;
  options.sampled_trials = args.trials;
  options.check.exact_counts = args.exact_budget;

  Manifest m("find-regular", common.argv);
  m["params"] = search_params(args, sigma, c, options);
  m["seeds"] = {{"seed", common.seed}};
  if (args.measure > 0) {
    const double rate = measure_pass_rate(args.n, args.m, sigma, c, common.seed, args.measure, options);
    m["pass_rate"] = {{"candidates", args.measure}, {"fraction", rate}};
  }
  try {
    const FoundTable found = find_regular(args.n, args.m, sigma, c, common.seed, options);
    const fs::path out = args.out ? fs::path(*args.out) : fs::path(cache_file_name(args.n, args.m, sigma, c, common.seed));
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    write_table_file(out, found.table);
    m.output("table", out);
    m["table_fingerprint"] = found.table.fingerprint();
    m["candidate_seed"] = found.candidate_seed;
    m["candidates_tried"] = found.candidates_tried;
    m["report"] = report_to_json(found.report);
    m.emit(common.json_path());
    return kOk;
  } catch (const SearchExhausted& e) {
    m["candidates_tried"] = e.best().candidates_tried;
    m["best_candidate_seed"] = e.best().candidate_seed;
    m["report"] = report_to_json(e.best().report);
    m["error"] = e.what();
    m.emit(common.json_path());
    std::cerr << "twosource: " << e.what() << "\n";
    return kInfeasible;
  }
}

// --------------------------------------------------------- verify-regular

struct VerifyArgs {
  std::string table;
  std::string sigma;
  std::string c = "2";
  std::string mode = "exact";
  std::optional<unsigned> k1;
  std::optional<unsigned> k2;
  std::uint64_t trials = 2000;
  double exact_budget = 1e9;
};

int cmd_verify_regular(const VerifyArgs& args, const Common& common) {
  const Rational sigma = flag_rational("sigma", args.sigma);
  const Rational c = flag_rational("c", args.c);
  if (args.k1.has_value() != args.k2.has_value()) throw UsageError("--k1 and --k2 go together");
  const ColorTable table = read_table_file(args.table);
  try {
    make_regularity_params(table.n(), table.m(), sigma, c);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  CheckBudget budget;
  budget.exact_counts = args.exact_budget;

  Manifest m("verify-regular", common.argv);
  m["params"] = {{"sigma", format_rational(sigma)}, {"c", format_rational(c)}, {"mode", args.mode},
                 {"trials", args.trials},           {"exact_budget", args.exact_budget},
                 {"k1", args.k1 ? json(*args.k1) : json(nullptr)},
                 {"k2", args.k2 ? json(*args.k2) : json(nullptr)}};
  m["seeds"] = {{"seed", common.seed}};
  m["inputs"].push_back({{"name", "table"},
                         {"origin", "file:" + args.table},
                         {"n", table.n()},
                         {"m", table.m()},
                         {"fingerprint", table.fingerprint()}});
  if (args.mode == "exact") {
    m["report"] = report_to_json(args.k1 ? check_regularity_strong(table, sigma, c, *args.k1, *args.k2, budget)
                                         : check_weak_regularity(table, sigma, c, budget));
  } else if (args.mode == "sampled") {
    if (args.k1) throw UsageError("--k1/--k2 apply to exact mode only");
    m["report"] = report_to_json(check_regularity_sampled(table, sigma, c, args.trials, common.seed));
  } else if (args.mode == "lift") {
    const LiftReport lift = check_lift(table, sigma, c, budget);
    json strong = json::array();
    for (const auto& r : lift.strong) strong.push_back(report_to_json(r));
    const char* verdict = lift.verdict == LiftVerdict::pass        ? "pass"
                          : lift.verdict == LiftVerdict::weak_fail ? "weak_fail"
                                                                   : "lemma_violation";
    m["lift"] = {{"verdict", verdict}, {"weak", report_to_json(lift.weak)}, {"strong", strong}};
  } else {
    throw UsageError("--mode must be exact, sampled or lift");
  }
  m.emit(common.json_path());
  return kOk;
}

// ---------------------------------------------------------------- extract

struct ExtractArgs {
  std::string tau;
  std::string a = "2";
  SourceFlags x;
  SourceFlags y;
  std::size_t out_len = 0;
  std::optional<std::size_t> blocks;
  std::string out = "z.txt";
};

PipelineConfig make_config(const Rational& tau, const BigInt& a, std::size_t out_len,
                           std::optional<std::size_t> blocks, const Common& common) {
  // Every block emits at least one bit, so out_len blocks always suffice.
  PipelineConfig config = plan(tau, a, blocks.value_or(out_len), common.toy_max_n, common.seed);
  if (common.budget) config.search.budget = *common.budget;
  if (common.cache_dir) config.cache_dir = fs::path(*common.cache_dir);
  return config;
}

json prefix_json(const PipelineConfig& config, std::size_t out_len) {
  const PrefixRequirement need = required_prefix(config, out_len);
  return {{"blocks", need.blocks}, {"prefix_bits", need.prefix_bits.str()}};
}

int cmd_extract(const ExtractArgs& args, const Common& common) {
  const Rational tau = checked_tau(args.tau);
  const BigInt a = flag_integer("a", args.a);
  if (a < 1) throw UsageError("--a must be >= 1");
  if (args.out_len < 1) throw UsageError("--out-len must be >= 1");
  const PipelineConfig config = make_config(tau, a, args.out_len, args.blocks, common);
  auto [xbits, xorigin] = load_source("x", args.x);
  auto [ybits, yorigin] = load_source("y", args.y);

  Manifest m("extract", common.argv);
  m["params"] = config_to_json(config);
  m["params"]["out_len"] = args.out_len;
  m["seeds"] = {{"base_seed", common.seed}};
  m.input("x", xorigin, xbits);
  m.input("y", yorigin, ybits);
  m["required_prefix"] = prefix_json(config, args.out_len);

  OracleSource x(std::move(xbits));
  OracleSource y(std::move(ybits));
  const RunResult result = run(config, x, y, args.out_len);
  write_bits_file(args.out, result.z);
  m.output("z", args.out);
  m["z_fingerprint"] = fingerprint_text(result.z.to_string());
  m["consumed"] = {{"x", result.trace.consumed_x}, {"y", result.trace.consumed_y}};
  m["trace"] = trace_to_json(result.trace);
  m.emit(common.json_path());
  return kOk;
}

// ------------------------------------------------------------------- rate

struct RateArgs {
  SourceFlags in;
  std::string checkpoints;
  std::optional<std::string> out;
};

int cmd_rate(const RateArgs& args, const Common& common) {
  const auto checkpoints = flag_lengths("checkpoints", args.checkpoints);
  if (checkpoints.empty()) throw UsageError("--checkpoints must list at least one prefix length");
  auto [bits, origin] = load_source("in", args.in);
  const RateEstimate r = rate_profile(bits, checkpoints);
  const std::string csv = rate_csv(r);

  Manifest m("rate", common.argv);
  m["params"] = {{"checkpoints", checkpoints}};
  m.input("in", origin, bits);
  if (args.out) {
    Manifest::write_text(*args.out, csv);
    m.output("csv", *args.out);
    m.emit(common.json_path());
  } else {
    std::cout << csv;
    if (common.json_out) m.emit(common.json_path());
  }
  return kOk;
}

// ------------------------------------------------------------- dependency

struct DependencyArgs {
  SourceFlags x;
  SourceFlags y;
  std::string n;
  std::string m;
  std::optional<std::int64_t> threshold;
  std::optional<std::string> out;
};

json dependency_json(const DependencyEstimate& d, std::int64_t threshold) {
  return {{"n", d.n},         {"m", d.m},
          {"khat_x", d.khat_x}, {"khat_y", d.khat_y},
          {"khat_xy", d.khat_xy}, {"value", d.value},
          {"threshold", threshold}, {"label", d.value > threshold ? "dependent" : "empirically independent"}};
}

int cmd_dependency(const DependencyArgs& args, const Common& common) {
  const auto ns = flag_lengths("n", args.n);
  const auto ms = flag_lengths("m", args.m);
  if (ns.empty() || ns.size() != ms.size()) throw UsageError("--n and --m must list the same positive number of lengths");
  auto [xbits, xorigin] = load_source("x", args.x);
  auto [ybits, yorigin] = load_source("y", args.y);

  Manifest man("dependency", common.argv);
  man["params"] = {{"n", ns}, {"m", ms}, {"threshold", args.threshold ? json(*args.threshold) : json("default")}};
  man.input("x", xorigin, xbits);
  man.input("y", yorigin, ybits);
  std::vector<DependencyEstimate> rows;
  json results = json::array();
  for (std::size_t i = 0; i < ns.size(); ++i) {
    rows.push_back(dependency_profile(xbits, ybits, ns[i], ms[i]));
    results.push_back(dependency_json(rows.back(), args.threshold.value_or(default_dependency_threshold(ns[i], ms[i]))));
  }
  man["results"] = results;
  const std::string csv = dependency_csv(rows);
  if (args.out) {
    Manifest::write_text(*args.out, csv);
    man.output("csv", *args.out);
    man.emit(common.json_path());
  } else {
    std::cout << csv;
    if (common.json_out) man.emit(common.json_path());
  }
  return kOk;
}

// ------------------------------------------------------------- experiment

struct ExperimentArgs {
  std::string tau = "1/2";
  std::string a = "2";
  std::optional<std::uint64_t> x_seed;
  std::optional<std::uint64_t> y_seed;
  std::size_t dilute = 2;
  std::size_t out_len = 2048;
  std::string checkpoints = "512,1024,2048";
  double min_gain = 0.05;
  std::optional<std::int64_t> threshold;
  std::string out_dir = "experiment";
};

json rate_json(const RateEstimate& r) {
  json out = json::array();
  for (const auto& c : r.checkpoints) {
    out.push_back({{"prefix_len", c.prefix_len}, {"khat_bits", c.khat_bits}, {"ratio", c.ratio}});
  }
  return out;
}

int cmd_experiment(const ExperimentArgs& args, Common common) {
  const Rational tau = checked_tau(args.tau);
  const BigInt a = flag_integer("a", args.a);
  if (a < 1) throw UsageError("--a must be >= 1");
  if (args.dilute < 2) throw UsageError("--dilute must be >= 2");
  const auto checkpoints = flag_lengths("checkpoints", args.checkpoints);
  if (checkpoints.empty()) throw UsageError("--checkpoints must list at least one prefix length");
  for (auto cp : checkpoints) {
    if (cp < 1 || cp > args.out_len) throw UsageError("checkpoints must lie in 1..out-len");
  }
  if (!common.toy_max_n) common.toy_max_n = 8;
  const std::uint64_t x_seed = args.x_seed.value_or(common.seed);
  const std::uint64_t y_seed = args.y_seed.value_or(common.seed + 1);

  const PipelineConfig config = make_config(tau, a, args.out_len, std::nullopt, common);
  const PrefixRequirement need = required_prefix(config, args.out_len);
  const auto prefix = need.prefix_bits.convert_to<std::size_t>();
  const std::size_t raw_len = (prefix + args.dilute - 1) / args.dilute;
  const BitString xbits = zero_dilute(seeded_source(x_seed, raw_len), args.dilute).prefix(prefix);
  const BitString ybits = zero_dilute(seeded_source(y_seed, raw_len), args.dilute).prefix(prefix);

  Manifest m("experiment", common.argv);
  m["params"] = config_to_json(config);
  m["params"]["out_len"] = args.out_len;
  m["params"]["dilute"] = args.dilute;
  m["params"]["checkpoints"] = checkpoints;
  m["params"]["min_gain"] = args.min_gain;
  m["seeds"] = {{"base_seed", common.seed}, {"x_seed", x_seed}, {"y_seed", y_seed}};
  m.input("x", "seeded:" + std::to_string(x_seed) + "|dilute:" + std::to_string(args.dilute), xbits);
  m.input("y", "seeded:" + std::to_string(y_seed) + "|dilute:" + std::to_string(args.dilute), ybits);

  OracleSource x(xbits);
  OracleSource y(ybits);
  const RunResult result = run(config, x, y, args.out_len);

  const RateEstimate rx = rate_profile(xbits, checkpoints);
  const RateEstimate ry = rate_profile(ybits, checkpoints);
  const RateEstimate rz = rate_profile(result.z, checkpoints);
  const fs::path dir = args.out_dir;
  fs::create_directories(dir);
  write_bits_file(dir / "z.txt", result.z);
  Manifest::write_text(dir / "rate_x.csv", rate_csv(rx));
  Manifest::write_text(dir / "rate_y.csv", rate_csv(ry));
  Manifest::write_text(dir / "rate_z.csv", rate_csv(rz));
  m.output("z", dir / "z.txt");
  m.output("rate_x", dir / "rate_x.csv");
  m.output("rate_y", dir / "rate_y.csv");
  m.output("rate_z", dir / "rate_z.csv");
  m["z_fingerprint"] = fingerprint_text(result.z.to_string());
  m["consumed"] = {{"x", result.trace.consumed_x}, {"y", result.trace.consumed_y}};
  m["blocks"] = result.trace.blocks.size();
  m["annotations"] = result.trace.annotations;
  m["rates"] = {{"x", rate_json(rx)}, {"y", rate_json(ry)}, {"z", rate_json(rz)}};

  const DependencyEstimate dep = dependency_profile(xbits, ybits, prefix, prefix);
  const std::int64_t threshold = args.threshold.value_or(default_dependency_threshold(prefix, prefix));
  m["dependency"] = dependency_json(dep, threshold);

  const double z_final = rz.checkpoints.back().ratio;
  const double x_final = rx.checkpoints.back().ratio;
  const double y_final = ry.checkpoints.back().ratio;
  json warnings = json::array();
  if (dep.value > threshold) {
    warnings.push_back("high measured dependency between x and y (" + std::to_string(dep.value) + " > " +
                       std::to_string(threshold) + " bits); sources are not independent, no rate-gain claim made");
    m["rate_gain_claim"] = nullptr;
  } else {
    const bool holds = z_final - x_final >= args.min_gain && z_final - y_final >= args.min_gain;
    m["rate_gain_claim"] = {{"prefix_len", checkpoints.back()},
                            {"rate_z", z_final},
                            {"rate_x", x_final},
                            {"rate_y", y_final},
                            {"gain_over_x", z_final - x_final},
                            {"gain_over_y", z_final - y_final},
                            {"min_gain", args.min_gain},
                            {"holds", holds},
                            {"grade", "compression estimate, not a certified rate"}};
  }
  m["warnings"] = warnings;
  m.emit(common.json_out ? fs::path(*common.json_out) : dir / "manifest.json");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-source extraction toolkit: schedules, regular tables, extraction runs, compression estimates"};
  app.set_version_flag("--version", std::string(TWOSOURCE_VERSION));
  app.require_subcommand(1);

  Common common;
  for (int i = 1; i < argc; ++i) common.argv.emplace_back(argv[i]);

  ScheduleArgs sched;
  auto* schedule = app.add_subcommand("schedule", "cut points t_i, block lengths n_i and output lengths m_i");
  schedule->add_option("--tau", sched.tau, "randomness rate of the sources, 0 < tau <= 1")->required();
  schedule->add_option("--a", sched.a, "first cut point t_1 (default 2)");
  schedule->add_option("--count", sched.count, "number of blocks (default 10)")->check(CLI::PositiveNumber);
  add_toy(schedule, common);
  add_json_out(schedule, common);

  FindArgs find;
  auto* find_cmd = app.add_subcommand("find-regular", "seeded search for a (sigma, c)-regular table");
  find_cmd->add_option("--n", find.n, "input length")->required()->check(CLI::Range(1U, 12U));
  find_cmd->add_option("--m", find.m, "output length")->required()->check(CLI::Range(1U, 32U));
  find_cmd->add_option("--sigma", find.sigma, "regularity exponent, 0 < sigma < 1")->required();
  find_cmd->add_option("--c", find.c, "load factor (default 2)");
  find_cmd->add_option("--trials", find.trials, "rectangles per sampled check (default 2000)");
  find_cmd->add_option("--exact-budget", find.exact_budget, "largest exact-mode enumeration (default 1e9)");
  find_cmd->add_option("--measure-pass-rate", find.measure, "also report the pass fraction over this many candidates");
  find_cmd->add_option("--out", find.out, "table file (default regfn_n<n>_m<m>_s<sigma>_c<c>_seed<seed>.txt)");
  add_seed(find_cmd, common);
  add_budget(find_cmd, common, "candidates to try (default 10000)");
  add_json_out(find_cmd, common);

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify-regular", "check a table file for regularity");
  verify_cmd->add_option("--table", verify.table, "table file")->required();
  verify_cmd->add_option("--sigma", verify.sigma, "regularity exponent")->required();
  verify_cmd->add_option("--c", verify.c, "load factor (default 2)");
  verify_cmd->add_option("--mode", verify.mode, "exact (default), sampled or lift");
  verify_cmd->add_option("--k1", verify.k1, "row exponent for a strong exact check");
  verify_cmd->add_option("--k2", verify.k2, "column exponent for a strong exact check");
  verify_cmd->add_option("--trials", verify.trials, "rectangles for sampled mode (default 2000)");
  verify_cmd->add_option("--exact-budget", verify.exact_budget, "largest exact-mode enumeration (default 1e9)");
  add_seed(verify_cmd, common);
  add_json_out(verify_cmd, common);

  ExtractArgs ext;
  auto* extract = app.add_subcommand("extract", "run the block extractor on two sources");
  extract->add_option("--tau", ext.tau, "randomness rate, 0 < tau <= 1")->required();
  extract->add_option("--a", ext.a, "first cut point (default 2)");
  add_source_flags(extract, "x", ext.x);
  add_source_flags(extract, "y", ext.y);
  extract->add_option("--out-len", ext.out_len, "output bits")->required();
  extract->add_option("--blocks", ext.blocks, "planned block limit (default out-len)");
  extract->add_option("--out", ext.out, "z bit file (default z.txt)");
  extract->add_option("--cache-dir", common.cache_dir, "regular-table cache directory");
  add_seed(extract, common);
  add_budget(extract, common, "candidates per block table search (default 10000)");
  add_toy(extract, common);
  add_json_out(extract, common);

  RateArgs rate_args;
  auto* rate = app.add_subcommand("rate", "compression-estimated rate profile of a bit string");
  add_source_flags(rate, "in", rate_args.in);
  rate->add_option("--checkpoints", rate_args.checkpoints, "comma-separated prefix lengths")->required();
  rate->add_option("--out", rate_args.out, "CSV file (default stdout)");
  add_json_out(rate, common);

  DependencyArgs dep;
  auto* dependency = app.add_subcommand("dependency", "compression-estimated dependency of two prefixes");
  add_source_flags(dependency, "x", dep.x);
  add_source_flags(dependency, "y", dep.y);
  dependency->add_option("--n", dep.n, "comma-separated x prefix lengths")->required();
  dependency->add_option("--m", dep.m, "comma-separated y prefix lengths")->required();
  dependency->add_option("--threshold", dep.threshold, "bits above which a pair is labeled dependent");
  dependency->add_option("--out", dep.out, "CSV file (default stdout)");
  add_json_out(dependency, common);

  ExperimentArgs exp;
  auto* experiment = app.add_subcommand("experiment", "diluted sources -> toy extraction -> rate and dependency profiles");
  experiment->add_option("--tau", exp.tau, "randomness rate (default 1/2)");
  experiment->add_option("--a", exp.a, "first cut point (default 2)");
  experiment->add_option("--x-seed", exp.x_seed, "seed of source x (default --seed)");
  experiment->add_option("--y-seed", exp.y_seed, "seed of source y (default --seed + 1)");
  experiment->add_option("--dilute", exp.dilute, "dilution period (default 2)");
  experiment->add_option("--out-len", exp.out_len, "output bits (default 2048)")->check(CLI::PositiveNumber);
  experiment->add_option("--checkpoints", exp.checkpoints, "comma-separated prefix lengths (default 512,1024,2048)");
  experiment->add_option("--min-gain", exp.min_gain, "rate margin for the gain claim (default 0.05)");
  experiment->add_option("--dependency-threshold", exp.threshold, "bits above which x, y count as dependent");
  experiment->add_option("--out-dir", exp.out_dir, "artifact directory (default ./experiment)");
  experiment->add_option("--cache-dir", common.cache_dir, "regular-table cache directory");
  add_seed(experiment, common);
  add_budget(experiment, common, "candidates per block table search (default 10000)");
  add_toy(experiment, common);
  add_json_out(experiment, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*schedule) return cmd_schedule(sched, common);
    if (*find_cmd) return cmd_find_regular(find, common);
    if (*verify_cmd) return cmd_verify_regular(verify, common);
    if (*extract) return cmd_extract(ext, common);
    if (*rate) return cmd_rate(rate_args, common);
    if (*dependency) return cmd_dependency(dep, common);
    if (*experiment) return cmd_experiment(exp, common);
  } catch (const UsageError& e) {
    std::cerr << "twosource: usage: " << e.what() << "\n";
    return kUsage;
  } catch (const InfeasibleError& e) {
    std::cerr << "twosource: infeasible: " << e.what() << "\n";
    return kInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "twosource: error: " << e.what() << "\n";
    return kData;
  }
  return kUsage;
}
