#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "twosource/color_table.hpp"
#include "twosource/errors.hpp"
#include "twosource/schedule.hpp"

namespace twosource {

/// Sorted ascending set of row (or column) indices in [0, 2^n).
using Subset = std::vector<std::uint64_t>;

/// Colexicographic order: compare the largest differing element. For subsets
/// of [0, 64) this is numeric order of the bitmasks.
bool colex_less(const Subset& a, const Subset& b);

/// Advances `s` (a k-subset of [0, n)) to its colex successor; returns false
/// after the last one.
bool next_colex_subset(Subset& s, std::uint64_t n);

/// C(n, k) as a double, saturating to infinity.
double binomial(double n, double k);

struct RegularityParams {
  unsigned n = 0;
  unsigned m = 0;
  Rational sigma;
  Rational c;
  unsigned k = 0;  // ceil(sigma * n)
};

/// Validates 0 < sigma < 1, c >= 1, 1 <= m, and sets k = ceil(sigma n).
RegularityParams make_regularity_params(unsigned n, unsigned m, const Rational& sigma, const Rational& c);

enum class CheckMode { exact, sampled };

struct Witness {
  Subset rows;
  Subset cols;
  std::uint64_t color = 0;
  std::uint64_t load = 0;
};

struct RegularityReport {
  bool pass = false;
  CheckMode mode = CheckMode::exact;
  unsigned n = 0;
  unsigned m = 0;
  Rational sigma;
  Rational c;
  unsigned k1 = 0;
  unsigned k2 = 0;
  /// Worst load * 2^m / (2^k1 * 2^k2); pass iff <= c.
  Rational max_load_ratio;
  /// Colex-least (rows, cols, color) attaining the maximum.
  std::optional<Witness> witness;
  /// Rectangles the verdict covers: every one in exact mode, the sampled
  /// ones otherwise.
  std::uint64_t rectangles_checked = 0;
  /// Sampled mode only: every rectangle was drawn exactly once.
  bool exhaustive = false;

  /// "certificate" for exact mode, "evidence" for sampled.
  std::string grade() const { return mode == CheckMode::exact ? "certificate" : "evidence"; }
};

nlohmann::json report_to_json(const RegularityReport& r);

struct CheckBudget {
  /// Exact mode allowed when C(N,K1) * C(N,K2) * 2^m <= this.
  double exact_counts = 1e9;
};

/// Thrown when exact enumeration exceeds the budget; callers should switch to
/// sampled mode.
class BudgetExceeded : public InfeasibleError {
 public:
  using InfeasibleError::InfeasibleError;
};

/// C(N, 2^k1) * C(N, 2^k2) * 2^m, the exact-mode cost measure.
double exact_cost(unsigned n, unsigned m, unsigned k1, unsigned k2);

/// Number of pairs (u, v) in rows x cols with f(u, v) = color.
std::uint64_t color_load(const ColorSource& f, std::uint64_t color, const Subset& rows, const Subset& cols);

/// Exact check over all rectangles with sides 2^k, k = ceil(sigma n).
RegularityReport check_weak_regularity(const ColorTable& f, const Rational& sigma, const Rational& c,
                                       const CheckBudget& budget = {});

/// Exact check over all rectangles with sides 2^k1 x 2^k2, where
/// sigma n <= k1, k2 <= n.
RegularityReport check_regularity_strong(const ColorTable& f, const Rational& sigma, const Rational& c,
                                         unsigned k1, unsigned k2, const CheckBudget& budget = {});

enum class LiftVerdict {
  pass,              // weak check and every strong check passed
  weak_fail,         // hypothesis unmet, strong checks skipped
  lemma_violation,   // weak passed but some strong check failed
};

struct LiftReport {
  LiftVerdict verdict = LiftVerdict::weak_fail;
  RegularityReport weak;
  std::vector<RegularityReport> strong;  // (k1, k2) with k <= k1, k2 <= n
};

/// Runs the weak check; if it passes, runs every strong check at
/// k <= k1, k2 <= n.
LiftReport check_lift(const ColorTable& f, const Rational& sigma, const Rational& c,
                      const CheckBudget& budget = {});

/// Draws `trials` uniform 2^k x 2^k rectangles (k = ceil(sigma n)). When
/// trials covers every rectangle, enumerates each exactly once instead.
RegularityReport check_regularity_sampled(const ColorSource& f, const Rational& sigma, const Rational& c,
                                          std::uint64_t trials, std::uint64_t seed);

/// False when the bound c 2^(2k) / 2^m at the smallest admissible rectangle
/// is below one cell, in which case no table of these sizes is regular.
bool regularity_attainable(unsigned n, unsigned m, const Rational& sigma, const Rational& c);

struct SearchOptions {
  std::uint64_t budget = 10000;   // candidates
  CheckBudget check;
  std::uint64_t sampled_trials = 2000;
};

struct FoundTable {
  ColorTable table;
  RegularityReport report;
  std::uint64_t candidate_seed = 0;
  std::uint64_t candidates_tried = 0;
};

/// Search ran out of candidates; carries the candidate with the smallest
/// max_load_ratio (earliest on ties).
class SearchExhausted : public InfeasibleError {
 public:
  SearchExhausted(const std::string& what, FoundTable best)
      : InfeasibleError(what), best_(std::move(best)) {}
  const FoundTable& best() const { return best_; }

 private:
  FoundTable best_;
};

/// Tries random_table(n, m, seed + j) for j = 0, 1, ... until one passes the
/// weak check (exact when within budget, sampled otherwise).
FoundTable find_regular(unsigned n, unsigned m, const Rational& sigma, const Rational& c,
                        std::uint64_t seed, const SearchOptions& options = {});

/// Fraction of candidates seed .. seed+count-1 passing the check find_regular
/// would use.
double measure_pass_rate(unsigned n, unsigned m, const Rational& sigma, const Rational& c,
                         std::uint64_t seed, std::uint64_t count, const SearchOptions& options = {});

struct ChernoffResult {
  bool holds = false;
  double lhs = 0;
  double rhs = 0;
  std::string lhs_text;  // 40 significant digits
  std::string rhs_text;
};

/// Evaluates (1/M) N^{2 sigma} / 3 - ln M  >  2 N^sigma + 2 N^sigma (1 - sigma) ln N
/// with N = 2^n, M = 2^m in 100-digit binary floating point.
ChernoffResult chernoff_feasible(unsigned n, unsigned m, const Rational& sigma);

struct ChernoffSweep {
  /// Smallest n in the range from which the inequality holds for every
  /// larger tested n; 0 if it never holds at n_max.
  unsigned threshold = 0;
  /// Smallest n in the range where it holds at all.
  unsigned first_hold = 0;
  unsigned n_max = 0;
};

/// Sweeps n = 1 .. n_max with m = floor(0.99 sigma n), skipping n with m < 1.
ChernoffSweep chernoff_threshold_sweep(const Rational& sigma, unsigned n_max);

struct PreimageCheck {
  bool holds = false;
  std::uint64_t count = 0;
  Rational bound;  // c |A| / 2^m * |rows| |cols|
};

/// Counts pairs in rows x cols whose color lies in `colors` (nonempty, no
/// duplicates) and compares against c |A| / 2^m * |rows x cols|.
PreimageCheck preimage_bound_check(const ColorSource& f, const std::vector<std::uint64_t>& colors,
                                   const Subset& rows, const Subset& cols, const Rational& c);

}  // namespace twosource
