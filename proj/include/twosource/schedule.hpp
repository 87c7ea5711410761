#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <nlohmann/json_fwd.hpp>

namespace twosource {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Exact parse of "3", "1/2" or "0.25". Throws ParseError.
Rational parse_rational(std::string_view text);
/// "p/q" in lowest terms, or "p" when q = 1.
std::string format_rational(const Rational& r);
double to_double(const Rational& r);
BigInt ceil_div(const Rational& r);

struct SplitParams {
  Rational tau;
  Rational sigma;        // tau / 2
  Rational sigma_prime;  // tau / 4
  BigInt a;              // first cut point
  BigInt b;              // ceil((1 - sigma) / sigma_prime)
};

struct SplitSchedule {
  SplitParams params;
  std::vector<BigInt> t;  // t_0 .. t_count
  std::vector<BigInt> n;  // n_1 .. n_count, stored at [i - 1]
  std::vector<BigInt> m;  // m_1 .. m_count, stored at [i - 1]
  /// Set when block lengths were capped; such schedules do not satisfy the
  /// splitting recursion.
  std::optional<BigInt> toy_cap;

  std::size_t blocks() const { return n.size(); }
};

/// sigma = tau/2, sigma' = tau/4, b = ceil((1 - sigma)/sigma'). Requires
/// 0 < tau <= 1 and a >= 1, else std::invalid_argument.
SplitParams derive_params(const Rational& tau, const BigInt& a);

/// t_0 = 0, t_1 = a, t_i = b (t_1 + ... + t_{i-1}); n_i = t_i - t_{i-1};
/// m_i = i^2. count >= 1.
SplitSchedule cut_points(const SplitParams& params, std::size_t count);

/// Same as cut_points but every n_i is replaced by min(n_i, cap) and the t
/// sequence is the running sum of the capped lengths.
SplitSchedule capped_cut_points(const SplitParams& params, std::size_t count, const BigInt& cap);

/// i^2, i >= 1.
BigInt output_length(std::size_t i);

/// The splitting step n1 = b * n0 for n0 >= 1.
BigInt splitting_threshold_note(const SplitParams& params, const BigInt& n0);

/// a b (1+b)^{i-2}, i >= 2.
BigInt closed_form_cut(const SplitParams& params, std::size_t i);
/// a b^2 (1+b)^{i-3}, i >= 3.
BigInt closed_form_block(const SplitParams& params, std::size_t i);

/// m_i / (m_1 + ... + m_{i-1}) for i >= 2.
Rational output_growth_ratio(std::size_t i);

/// {tau, sigma, sigma_prime, a, b, t, n, m}; all numbers as decimal strings.
nlohmann::json schedule_to_json(const SplitSchedule& s);

}  // namespace twosource
