#include <gmp.h>

#include <cstring>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "twosource/errors.hpp"
#include "twosource/schedule.hpp"

using namespace twosource;

namespace {

std::vector<BigInt> big(std::initializer_list<long> v) { return {v.begin(), v.end()}; }

// Recursion evaluated with GMP, independent of Boost's cpp_int.
std::vector<std::string> gmp_cut_points(unsigned long a, unsigned long b, std::size_t count) {
  std::vector<std::string> out{"0"};
  mpz_t t, sum;
  mpz_init_set_ui(t, a);
  mpz_init_set_ui(sum, 0);
  for (std::size_t i = 1; i <= count; ++i) {
    if (i >= 2) mpz_mul_ui(t, sum, b);
    mpz_add(sum, sum, t);
    char* s = mpz_get_str(nullptr, 10, t);
    out.emplace_back(s);
    void (*freefunc)(void*, size_t);
    mp_get_memory_functions(nullptr, nullptr, &freefunc);
    freefunc(s, std::strlen(s) + 1);
  }
  mpz_clear(t);
  mpz_clear(sum);
  return out;
}

}  // namespace

TEST_CASE("parse_rational is exact") {
  CHECK(parse_rational("1") == Rational(1));
  CHECK(parse_rational("0.5") == Rational(1, 2));
  CHECK(parse_rational("1/2") == Rational(1, 2));
  CHECK(parse_rational("2/3") == Rational(2, 3));
  CHECK(parse_rational(".25") == Rational(1, 4));
  CHECK(parse_rational("-1/4") == Rational(-1, 4));
  CHECK(format_rational(Rational(6, 4)) == "3/2");
  CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
  CHECK_THROWS_AS(parse_rational("abc"), ParseError);
  CHECK_THROWS_AS(parse_rational(""), ParseError);
}

TEST_CASE("derive_params examples") {
  const auto p = derive_params(1, 2);
  CHECK(p.sigma == Rational(1, 2));
  CHECK(p.sigma_prime == Rational(1, 4));
  CHECK(p.b == 2);

  const auto q = derive_params(Rational(1, 2), 2);
  CHECK(q.sigma == Rational(1, 4));
  CHECK(q.sigma_prime == Rational(1, 8));
  CHECK(q.b == 6);

  CHECK_THROWS_AS(derive_params(2, 1), std::invalid_argument);
  CHECK_THROWS_AS(derive_params(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(derive_params(Rational(1, 2), 0), std::invalid_argument);
}

TEST_CASE("sigma' stays strictly between 0 and tau - sigma") {
  for (const char* tau : {"1", "1/2", "1/3", "0.1", "7/9", "1/100"}) {
    const auto p = derive_params(parse_rational(tau), 1);
    CHECK(p.sigma_prime > 0);
    CHECK(p.sigma_prime < p.tau - p.sigma);
    CHECK(p.b >= 1);
  }
}

TEST_CASE("cut_points for a=2, b=2") {
  const auto s = cut_points(derive_params(1, 2), 4);
  CHECK(s.t == big({0, 2, 4, 12, 36}));
  CHECK(s.n == big({2, 2, 8, 24}));
  CHECK(s.m == big({1, 4, 9, 16}));
  CHECK(closed_form_cut(s.params, 4) == 36);
}

TEST_CASE("recursion and closed forms agree exactly") {
  for (const char* tau : {"1", "1/2", "1/3", "3/10", "1/7"}) {
    for (int a : {1, 2, 5, 1000}) {
      const auto s = cut_points(derive_params(parse_rational(tau), a), 40);
      BigInt sum = 0;
      for (std::size_t i = 1; i <= 40; ++i) {
        if (i >= 2) REQUIRE(s.t[i] == closed_form_cut(s.params, i));
        if (i >= 3) REQUIRE(s.n[i - 1] == closed_form_block(s.params, i));
        sum += s.n[i - 1];
        REQUIRE(sum == s.t[i]);
        REQUIRE(s.m[i - 1] == BigInt(i) * i);
      }
    }
  }
}

TEST_CASE("schedule digits match an independent GMP evaluation") {
  for (const char* tau : {"1", "1/2", "1/9"}) {
    const auto s = cut_points(derive_params(parse_rational(tau), 3), 60);
    const auto expected = gmp_cut_points(3, s.params.b.convert_to<unsigned long>(), 60);
    for (std::size_t i = 0; i <= 60; ++i) REQUIRE(s.t[i].str() == expected[i]);
  }
}

TEST_CASE("capped schedule") {
  const auto s = capped_cut_points(derive_params(1, 2), 4, 4);
  CHECK(s.n == big({2, 2, 4, 4}));
  CHECK(s.t == big({0, 2, 4, 8, 12}));
  CHECK(s.toy_cap == BigInt(4));
}

TEST_CASE("output_length") {
  CHECK(output_length(1) == 1);
  CHECK(output_length(3) == 9);
  CHECK(output_length(10) == 100);
  CHECK_THROWS(output_length(0));
}

TEST_CASE("splitting_threshold_note") {
  CHECK(splitting_threshold_note(derive_params(1, 2), 10) == 20);
  CHECK(splitting_threshold_note(derive_params(Rational(1, 2), 2), 4) == 24);
  CHECK_THROWS(splitting_threshold_note(derive_params(1, 2), 0));
}

TEST_CASE("m_i / (m_1 + ... + m_{i-1}) decreases towards zero") {
  Rational previous = output_growth_ratio(3);
  for (std::size_t i = 4; i <= 200; ++i) {
    const Rational r = output_growth_ratio(i);
    REQUIRE(r < previous);
    previous = r;
  }
  // 100 / 285 at i = 10; the ratio first drops below 1/4 at i = 14 (196/819).
  CHECK(output_growth_ratio(10) == Rational(100, 285));
  CHECK(output_growth_ratio(13) > Rational(1, 4));
  CHECK(output_growth_ratio(14) < Rational(1, 4));
  CHECK(output_growth_ratio(200) < Rational(2, 100));
}

TEST_CASE("schedule JSON uses decimal strings") {
  const auto j = schedule_to_json(cut_points(derive_params(1, 2), 20));
  CHECK(j["tau"] == "1");
  CHECK(j["sigma"] == "1/2");
  CHECK(j["b"] == "2");
  CHECK(j["t"][4] == "36");
  CHECK(j["t"].size() == 21);
  // t_20 = 2 * 2 * 3^18
  CHECK(j["t"][20] == "1549681956");
  CHECK(j["n"][0].is_string());
}
