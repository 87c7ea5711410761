#include "twosource/schedule.hpp"

#include <stdexcept>

#include <nlohmann/json.hpp>

#include "twosource/errors.hpp"

namespace twosource {

namespace {

BigInt parse_digits(std::string_view digits, std::string_view whole, std::size_t offset) {
  if (digits.empty()) throw ParseError("expected digits in '" + std::string(whole) + "'", offset + 1);
  BigInt v = 0;
  for (std::size_t j = 0; j < digits.size(); ++j) {
    const char c = digits[j];
    if (c < '0' || c > '9') {
      throw ParseError("invalid character in number '" + std::string(whole) + "' at position " +
                           std::to_string(offset + j + 1),
                       offset + j + 1);
    }
    v = v * 10 + (c - '0');
  }
  return v;
}

BigInt pow(BigInt base, std::size_t e) {
  BigInt r = 1;
  while (e) {
    if (e & 1U) r *= base;
    base *= base;
    e >>= 1U;
  }
  return r;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  std::size_t offset = 0;
  if (!s.empty() && s.front() == '-') {
    negative = true;
    s.remove_prefix(1);
    offset = 1;
  }
  Rational r;
  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    const BigInt p = parse_digits(s.substr(0, slash), text, offset);
    const BigInt q = parse_digits(s.substr(slash + 1), text, offset + slash + 1);
    if (q == 0) throw ParseError("zero denominator in '" + std::string(text) + "'", offset + slash + 2);
    r = Rational(p, q);
  } else if (const auto dot = s.find('.'); dot != std::string_view::npos) {
    const auto frac = s.substr(dot + 1);
    const BigInt whole = dot == 0 ? BigInt(0) : parse_digits(s.substr(0, dot), text, offset);
    const BigInt f = parse_digits(frac, text, offset + dot + 1);
    r = Rational(whole) + Rational(f, pow(10, frac.size()));
  } else {
    r = Rational(parse_digits(s, text, offset));
  }
  return negative ? Rational(-r) : r;
}

std::string format_rational(const Rational& r) {
  const BigInt p = numerator(r);
  const BigInt q = denominator(r);
  if (q == 1) return p.str();
  return p.str() + "/" + q.str();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

BigInt ceil_div(const Rational& r) {
  const BigInt p = numerator(r);
  const BigInt q = denominator(r);
  BigInt quotient = p / q;
  if (quotient * q < p) quotient += 1;
  return quotient;
}

SplitParams derive_params(const Rational& tau, const BigInt& a) {
  if (tau <= 0 || tau > 1) {
    throw std::invalid_argument("tau must lie in (0, 1], got " + format_rational(tau));
  }
  if (a < 1) throw std::invalid_argument("first cut point a must be >= 1");
  SplitParams p;
  p.tau = tau;
  p.sigma = tau / 2;
  p.sigma_prime = tau / 4;
  p.a = a;
  p.b = ceil_div((Rational(1) - p.sigma) / p.sigma_prime);
  return p;
}

SplitSchedule cut_points(const SplitParams& params, std::size_t count) {
  if (count < 1) throw std::invalid_argument("cut_points: count must be >= 1");
  SplitSchedule s;
  s.params = params;
  s.t.reserve(count + 1);
  s.t.push_back(0);
  s.t.push_back(params.a);
  BigInt running = params.a;
  for (std::size_t i = 2; i <= count; ++i) {
    const BigInt ti = params.b * running;
    s.t.push_back(ti);
    running += ti;
  }
  for (std::size_t i = 1; i <= count; ++i) {
    s.n.push_back(s.t[i] - s.t[i - 1]);
    s.m.push_back(output_length(i));
  }
  return s;
}

SplitSchedule capped_cut_points(const SplitParams& params, std::size_t count, const BigInt& cap) {
  if (cap < 1) throw std::invalid_argument("toy cap must be >= 1");
  SplitSchedule s = cut_points(params, count);
  s.toy_cap = cap;
  for (std::size_t i = 1; i <= count; ++i) {
    if (s.n[i - 1] > cap) s.n[i - 1] = cap;
    s.t[i] = s.t[i - 1] + s.n[i - 1];
  }
  return s;
}

BigInt output_length(std::size_t i) {
  if (i < 1) throw std::invalid_argument("output_length: block index must be >= 1");
  return BigInt(i) * i;
}

BigInt splitting_threshold_note(const SplitParams& params, const BigInt& n0) {
  if (n0 < 1) throw std::invalid_argument("splitting_threshold_note: n0 must be >= 1");
  return params.b * n0;
}

BigInt closed_form_cut(const SplitParams& params, std::size_t i) {
  if (i < 2) throw std::invalid_argument("closed_form_cut: i must be >= 2");
  return params.a * params.b * pow(BigInt(1 + params.b), static_cast<unsigned>(i - 2));
}

BigInt closed_form_block(const SplitParams& params, std::size_t i) {
  if (i < 3) throw std::invalid_argument("closed_form_block: i must be >= 3");
  return params.a * params.b * params.b * pow(BigInt(1 + params.b), static_cast<unsigned>(i - 3));
}

Rational output_growth_ratio(std::size_t i) {
  if (i < 2) throw std::invalid_argument("output_growth_ratio: i must be >= 2");
  BigInt sum = 0;
  for (std::size_t j = 1; j < i; ++j) sum += output_length(j);
  return Rational(output_length(i), sum);
}

nlohmann::json schedule_to_json(const SplitSchedule& s) {
  auto strings = [](const std::vector<BigInt>& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& x : v) arr.push_back(x.str());
    return arr;
  };
  nlohmann::json j;
  j["tau"] = format_rational(s.params.tau);
  j["sigma"] = format_rational(s.params.sigma);
  j["sigma_prime"] = format_rational(s.params.sigma_prime);
  j["a"] = s.params.a.str();
  j["b"] = s.params.b.str();
  j["t"] = strings(s.t);
  j["n"] = strings(s.n);
  j["m"] = strings(s.m);
  if (s.toy_cap) j["toy_cap"] = s.toy_cap->str();
  return j;
}

}  // namespace twosource
