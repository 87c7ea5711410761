#include "twosource/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <nlohmann/json.hpp>

#include "twosource/errors.hpp"
#include "twosource/splitmix.hpp"

namespace twosource {

bool colex_less(const Subset& a, const Subset& b) {
  auto ia = a.rbegin();
  auto ib = b.rbegin();
  for (; ia != a.rend() && ib != b.rend(); ++ia, ++ib) {
    if (*ia != *ib) return *ia < *ib;
  }
  // A proper "suffix" in this order is the smaller set.
  return ia == a.rend() && ib != b.rend();
}

bool next_colex_subset(Subset& s, std::uint64_t n) {
  const std::size_t k = s.size();
  for (std::size_t j = 0; j < k; ++j) {
    const std::uint64_t limit = (j + 1 < k) ? s[j + 1] : n;
    if (s[j] + 1 < limit) {
      ++s[j];
      for (std::size_t i = 0; i < j; ++i) s[i] = i;
      return true;
    }
  }
  return false;
}

double binomial(double n, double k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  double r = 1;
  for (double i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (!std::isfinite(r)) return std::numeric_limits<double>::infinity();
  }
  return std::round(r);
}

RegularityParams make_regularity_params(unsigned n, unsigned m, const Rational& sigma, const Rational& c) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  if (sigma <= 0 || sigma >= 1) throw std::invalid_argument("sigma must lie in (0, 1)");
  if (c < 1) throw std::invalid_argument("c must be >= 1");
  RegularityParams p{n, m, sigma, c, 0};
  p.k = static_cast<unsigned>(ceil_div(sigma * n));
  if (p.k < 1 || p.k > n) throw std::invalid_argument("k = ceil(sigma n) must lie in [1, n]");
  return p;
}

nlohmann::json report_to_json(const RegularityReport& r) {
  nlohmann::json j;
  j["verdict"] = r.pass ? "pass" : "fail";
  j["mode"] = r.mode == CheckMode::exact ? "exact" : "sampled";
  j["grade"] = r.grade();
  j["n"] = r.n;
  j["m"] = r.m;
  j["sigma"] = format_rational(r.sigma);
  j["c"] = format_rational(r.c);
  j["k1"] = r.k1;
  j["k2"] = r.k2;
  j["max_load_ratio"] = format_rational(r.max_load_ratio);
  j["max_load_ratio_decimal"] = to_double(r.max_load_ratio);
  j["rectangles_checked"] = r.rectangles_checked;
  if (r.mode == CheckMode::sampled) j["exhaustive"] = r.exhaustive;
  if (r.witness) {
    j["witness"] = {{"rows", r.witness->rows},
                    {"cols", r.witness->cols},
                    {"color", r.witness->color},
                    {"load", r.witness->load}};
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

double exact_cost(unsigned n, unsigned m, unsigned k1, unsigned k2) {
  const double side = std::ldexp(1.0, static_cast<int>(n));
  return binomial(side, std::ldexp(1.0, static_cast<int>(k1))) *
         binomial(side, std::ldexp(1.0, static_cast<int>(k2))) * std::ldexp(1.0, static_cast<int>(m));
}

std::uint64_t color_load(const ColorSource& f, std::uint64_t color, const Subset& rows, const Subset& cols) {
  std::uint64_t load = 0;
  for (auto u : rows) {
    for (auto v : cols) {
      if (f.color(u, v) == color) ++load;
    }
  }
  return load;
}

namespace {

RegularityReport base_report(const RegularityParams& p, CheckMode mode, unsigned k1, unsigned k2) {
  RegularityReport r;
  r.mode = mode;
  r.n = p.n;
  r.m = p.m;
  r.sigma = p.sigma;
  r.c = p.c;
  r.k1 = k1;
  r.k2 = k2;
  return r;
}

void finish_report(RegularityReport& r, std::uint64_t worst_load) {
  r.max_load_ratio = Rational(BigInt(worst_load) << r.m, BigInt(1) << (r.k1 + r.k2));
  r.pass = r.max_load_ratio <= r.c;
}

// For a fixed row set B1 the heaviest column set for color a is the K2
// columns with the largest per-column counts of a, so one pass over the row
// sets covers every rectangle. Ties in the column choice go to the smallest
// indices, which is the colex-least optimal column set.
RegularityReport exact_check(const ColorTable& f, const RegularityParams& p, unsigned k1, unsigned k2,
                             const CheckBudget& budget) {
  const double cost = exact_cost(p.n, p.m, k1, k2);
  if (!(cost <= budget.exact_counts)) {
    throw BudgetExceeded("exact regularity check needs " + std::to_string(cost) +
                         " counts, budget is " + std::to_string(budget.exact_counts) +
                         "; use sampled mode");
  }
  const std::uint64_t side = f.side();
  const std::uint64_t rows_size = std::uint64_t{1} << k1;
  const std::uint64_t cols_size = std::uint64_t{1} << k2;
  const std::uint64_t colors = std::uint64_t{1} << p.m;

  RegularityReport report = base_report(p, CheckMode::exact, k1, k2);
  Subset rows(rows_size);
  for (std::uint64_t i = 0; i < rows_size; ++i) rows[i] = i;

  std::vector<std::uint32_t> counts(side * colors);
  std::vector<std::uint64_t> histogram(rows_size + 1);
  std::uint64_t best_load = 0;
  std::optional<Witness> best;
  std::uint64_t row_sets = 0;
  std::uint64_t best_row_set = 0;

  auto column_set = [&](std::uint64_t a, std::uint32_t threshold, std::uint64_t above) {
    Subset cols;
    cols.reserve(cols_size);
    std::uint64_t ties_needed = cols_size - above;
    for (std::uint64_t v = 0; v < side; ++v) {
      const auto c = counts[v * colors + a];
      if (c > threshold) {
        cols.push_back(v);
      } else if (c == threshold && ties_needed > 0) {
        cols.push_back(v);
        --ties_needed;
      }
    }
    return cols;
  };

  do {
    std::fill(counts.begin(), counts.end(), 0);
    for (auto u : rows) {
      for (std::uint64_t v = 0; v < side; ++v) ++counts[v * colors + f.at(u, v)];
    }
    for (std::uint64_t a = 0; a < colors; ++a) {
      std::fill(histogram.begin(), histogram.end(), 0);
      for (std::uint64_t v = 0; v < side; ++v) ++histogram[counts[v * colors + a]];
      std::uint64_t load = 0;
      std::uint64_t taken = 0;
      std::uint32_t threshold = 0;
      std::uint64_t above = 0;
      for (std::uint64_t value = rows_size + 1; value-- > 0;) {
        const std::uint64_t take = std::min(histogram[value], cols_size - taken);
        if (take < histogram[value] || taken + take == cols_size) {
          threshold = static_cast<std::uint32_t>(value);
          above = taken;
          load += take * value;
          taken += take;
          break;
        }
        load += take * value;
        taken += take;
      }
      const bool better = !best || load > best_load;
      const bool tie_same_rows = best && load == best_load && best_row_set == row_sets;
      if (!better && !tie_same_rows) continue;
      Witness w{rows, column_set(a, threshold, above), a, load};
      if (tie_same_rows && !colex_less(w.cols, best->cols)) continue;
      best = std::move(w);
      best_load = load;
      best_row_set = row_sets;
    }
    ++row_sets;
  } while (next_colex_subset(rows, side));

  report.rectangles_checked = static_cast<std::uint64_t>(cost / static_cast<double>(colors));
  report.witness = std::move(best);
  finish_report(report, best_load);
  return report;
}

bool witness_less(const Witness& a, const Witness& b) {
  if (a.rows != b.rows) return colex_less(a.rows, b.rows);
  if (a.cols != b.cols) return colex_less(a.cols, b.cols);
  return a.color < b.color;
}

// Heaviest color of one rectangle, least color on ties.
std::pair<std::uint64_t, std::uint64_t> heaviest_color(const ColorSource& f, const Subset& rows,
                                                       const Subset& cols, std::vector<std::uint64_t>& scratch) {
  scratch.clear();
  for (auto u : rows) {
    for (auto v : cols) scratch.push_back(f.color(u, v));
  }
  std::sort(scratch.begin(), scratch.end());
  std::uint64_t best_color = scratch.front();
  std::uint64_t best_load = 0;
  for (std::size_t i = 0; i < scratch.size();) {
    std::size_t j = i;
    while (j < scratch.size() && scratch[j] == scratch[i]) ++j;
    if (j - i > best_load) {
      best_load = j - i;
      best_color = scratch[i];
    }
    i = j;
  }
  return {best_color, best_load};
}

}  // namespace

RegularityReport check_weak_regularity(const ColorTable& f, const Rational& sigma, const Rational& c,
                                       const CheckBudget& budget) {
  const auto p = make_regularity_params(f.n(), f.m(), sigma, c);
  return exact_check(f, p, p.k, p.k, budget);
}

RegularityReport check_regularity_strong(const ColorTable& f, const Rational& sigma, const Rational& c,
                                         unsigned k1, unsigned k2, const CheckBudget& budget) {
  const auto p = make_regularity_params(f.n(), f.m(), sigma, c);
  const Rational floor_k = sigma * f.n();
  if (Rational(k1) < floor_k || Rational(k2) < floor_k || k1 > f.n() || k2 > f.n()) {
    throw std::invalid_argument("strong check needs sigma*n <= k1, k2 <= n");
  }
  return exact_check(f, p, k1, k2, budget);
}

LiftReport check_lift(const ColorTable& f, const Rational& sigma, const Rational& c, const CheckBudget& budget) {
  const auto p = make_regularity_params(f.n(), f.m(), sigma, c);
  LiftReport out;
  out.weak = exact_check(f, p, p.k, p.k, budget);
  if (!out.weak.pass) {
    out.verdict = LiftVerdict::weak_fail;
    return out;
  }
  out.verdict = LiftVerdict::pass;
  for (unsigned k1 = p.k; k1 <= p.n; ++k1) {
    for (unsigned k2 = p.k; k2 <= p.n; ++k2) {
      out.strong.push_back(exact_check(f, p, k1, k2, budget));
      if (!out.strong.back().pass) out.verdict = LiftVerdict::lemma_violation;
    }
  }
  return out;
}

RegularityReport check_regularity_sampled(const ColorSource& f, const Rational& sigma, const Rational& c,
                                          std::uint64_t trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("sampled check needs trials >= 1");
  const auto p = make_regularity_params(f.n(), f.m(), sigma, c);
  const std::uint64_t side = f.side();
  const std::uint64_t size = std::uint64_t{1} << p.k;
  if (p.k > 12) throw InfeasibleError("sampled check: rectangles of 2^" + std::to_string(2 * p.k) + " cells");

  RegularityReport report = base_report(p, CheckMode::sampled, p.k, p.k);
  std::vector<std::uint64_t> scratch;
  std::optional<Witness> best;
  auto consider = [&](const Subset& rows, const Subset& cols) {
    const auto [color, load] = heaviest_color(f, rows, cols, scratch);
    if (best && load < best->load) return;
    Witness w{rows, cols, color, load};
    if (!best || load > best->load || witness_less(w, *best)) best = std::move(w);
  };

  const double per_side = binomial(static_cast<double>(side), static_cast<double>(size));
  const double total = per_side * per_side;
  if (static_cast<double>(trials) >= total) {
    report.exhaustive = true;
    Subset rows(size);
    for (std::uint64_t i = 0; i < size; ++i) rows[i] = i;
    do {
      Subset cols(size);
      for (std::uint64_t i = 0; i < size; ++i) cols[i] = i;
      do {
        consider(rows, cols);
      } while (next_colex_subset(cols, side));
    } while (next_colex_subset(rows, side));
    report.rectangles_checked = static_cast<std::uint64_t>(total);
  } else {
    SplitMix64 rng(seed);
    for (std::uint64_t t = 0; t < trials; ++t) {
      const Subset rows = sample_subset(rng, side, size);
      const Subset cols = sample_subset(rng, side, size);
      consider(rows, cols);
    }
    report.rectangles_checked = trials;
  }
  report.witness = best;
  finish_report(report, best->load);
  return report;
}

bool regularity_attainable(unsigned n, unsigned m, const Rational& sigma, const Rational& c) {
  const auto p = make_regularity_params(n, m, sigma, c);
  return c * (BigInt(1) << (2 * p.k)) >= (BigInt(1) << m);
}

namespace {

RegularityReport search_check(const ColorTable& table, const Rational& sigma, const Rational& c,
                              std::uint64_t sample_seed, const SearchOptions& options) {
  const auto p = make_regularity_params(table.n(), table.m(), sigma, c);
  if (exact_cost(p.n, p.m, p.k, p.k) <= options.check.exact_counts) {
    return exact_check(table, p, p.k, p.k, options.check);
  }
  return check_regularity_sampled(table, sigma, c, options.sampled_trials, sample_seed);
}

}  // namespace

FoundTable find_regular(unsigned n, unsigned m, const Rational& sigma, const Rational& c, std::uint64_t seed,
                        const SearchOptions& options) {
  make_regularity_params(n, m, sigma, c);
  if (options.budget < 1) throw std::invalid_argument("search budget must be >= 1");
  std::optional<FoundTable> best;
  for (std::uint64_t j = 0; j < options.budget; ++j) {
    const std::uint64_t candidate = seed + j;
    ColorTable table = random_table(n, m, candidate);
    RegularityReport report = search_check(table, sigma, c, candidate, options);
    if (report.pass) return FoundTable{std::move(table), std::move(report), candidate, j + 1};
    if (!best || report.max_load_ratio < best->report.max_load_ratio) {
      best = FoundTable{std::move(table), std::move(report), candidate, j + 1};
    }
  }
  best->candidates_tried = options.budget;
  throw SearchExhausted("no (" + format_rational(sigma) + ", " + format_rational(c) +
                            ")-regular table found for n=" + std::to_string(n) + " m=" + std::to_string(m) +
                            " within " + std::to_string(options.budget) + " candidates",
                        std::move(*best));
}

double measure_pass_rate(unsigned n, unsigned m, const Rational& sigma, const Rational& c, std::uint64_t seed,
                         std::uint64_t count, const SearchOptions& options) {
  if (count == 0) return 0;
  std::uint64_t passed = 0;
  for (std::uint64_t j = 0; j < count; ++j) {
    const ColorTable table = random_table(n, m, seed + j);
    if (search_check(table, sigma, c, seed + j, options).pass) ++passed;
  }
  return static_cast<double>(passed) / static_cast<double>(count);
}

ChernoffResult chernoff_feasible(unsigned n, unsigned m, const Rational& sigma) {
  using Float = boost::multiprecision::cpp_bin_float_100;
  if (n < 1 || m < 1) throw std::invalid_argument("chernoff_feasible needs n >= 1, m >= 1");
  const Float ln2 = boost::multiprecision::log(Float(2));
  const Float s = Float(numerator(sigma).str()) / Float(denominator(sigma).str());
  const Float ln_n = Float(n) * ln2;  // ln N
  const Float ln_m = Float(m) * ln2;  // ln M
  const Float n_sigma = boost::multiprecision::exp(s * ln_n);
  const Float lhs = boost::multiprecision::exp(2 * s * ln_n - ln_m) / 3 - ln_m;
  const Float rhs = 2 * n_sigma + 2 * n_sigma * (1 - s) * ln_n;
  ChernoffResult r;
  r.holds = lhs > rhs;
  r.lhs = lhs.convert_to<double>();
  r.rhs = rhs.convert_to<double>();
  r.lhs_text = lhs.str(40, std::ios_base::scientific);
  r.rhs_text = rhs.str(40, std::ios_base::scientific);
  return r;
}

ChernoffSweep chernoff_threshold_sweep(const Rational& sigma, unsigned n_max) {
  ChernoffSweep sweep;
  sweep.n_max = n_max;
  std::vector<bool> holds(n_max + 1, false);
  for (unsigned n = 1; n <= n_max; ++n) {
    const Rational target = Rational(99, 100) * sigma * n;
    const BigInt m = numerator(target) / denominator(target);
    if (m < 1) continue;
    holds[n] = chernoff_feasible(n, static_cast<unsigned>(m), sigma).holds;
    if (holds[n] && sweep.first_hold == 0) sweep.first_hold = n;
  }
  if (n_max >= 1 && holds[n_max]) {
    unsigned n = n_max;
    while (n > 1 && holds[n - 1]) --n;
    sweep.threshold = n;
  }
  return sweep;
}

PreimageCheck preimage_bound_check(const ColorSource& f, const std::vector<std::uint64_t>& colors,
                                   const Subset& rows, const Subset& cols, const Rational& c) {
  if (colors.empty()) throw std::invalid_argument("preimage_bound_check: color set must be nonempty");
  std::vector<std::uint64_t> sorted = colors;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("preimage_bound_check: duplicate colors");
  }
  PreimageCheck out;
  for (auto u : rows) {
    for (auto v : cols) {
      if (std::binary_search(sorted.begin(), sorted.end(), f.color(u, v))) ++out.count;
    }
  }
  out.bound = c * Rational(BigInt(sorted.size()) * rows.size() * cols.size(), BigInt(1) << f.m());
  out.holds = Rational(out.count) <= out.bound;
  return out;
}

}  // namespace twosource
