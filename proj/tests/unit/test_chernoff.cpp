#include <cmath>

#include "doctest.h"
#include "mpfr_oracle.hpp"
#include "twosource/regularity.hpp"

using namespace twosource;

using oracle::mpfr_sides;

TEST_CASE("chernoff_feasible at n=10, m=4, sigma=1/2") {
  const auto r = chernoff_feasible(10, 4, Rational(1, 2));
  CHECK_FALSE(r.holds);
  CHECK(r.lhs == doctest::Approx(18.56).epsilon(0.001));
  CHECK(r.rhs == doctest::Approx(285.8).epsilon(0.001));
  const auto o = mpfr_sides(10, 4, 1, 2);
  CHECK(std::abs(r.lhs - o.lhs) <= 1e-12 * std::abs(o.lhs));
  CHECK(std::abs(r.rhs - o.rhs) <= 1e-12 * std::abs(o.rhs));
}

TEST_CASE("chernoff_feasible agrees with MPFR on a grid") {
  for (unsigned n : {4U, 16U, 64U, 200U, 900U}) {
    for (unsigned m : {1U, 3U, 10U, 40U}) {
      const auto r = chernoff_feasible(n, m, Rational(1, 2));
      const auto o = mpfr_sides(n, m, 1, 2);
      REQUIRE(r.holds == o.holds);
      REQUIRE(std::abs(r.rhs - o.rhs) <= 1e-12 * std::abs(o.rhs));
      REQUIRE(std::abs(r.lhs - o.lhs) <= 1e-12 * std::abs(o.lhs) + 1e-12);
    }
  }
}

TEST_CASE("holding at m implies holding at every smaller m") {
  for (unsigned n = 8; n <= 4000; n += 97) {
    bool seen_fail = false;
    // Walk m upward; once it fails it must keep failing.
    for (unsigned m = 1; m <= n; m += 3) {
      const bool holds = chernoff_feasible(n, m, Rational(1, 2)).holds;
      if (!holds) seen_fail = true;
      REQUIRE_FALSE((seen_fail && holds));
    }
  }
}

TEST_CASE("threshold sweep at m = floor(0.99 sigma n)") {
  const auto sweep = chernoff_threshold_sweep(Rational(1, 2), 6000);
  CHECK(sweep.threshold > 0);
  CHECK(sweep.first_hold > 0);
  CHECK(sweep.first_hold <= sweep.threshold);
  const auto again = chernoff_threshold_sweep(Rational(1, 2), 6000);
  CHECK(again.threshold == sweep.threshold);
  MESSAGE("smallest n with the inequality holding from there on: " << sweep.threshold);
}
