#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "naive_oracle.hpp"
#include "twosource/errors.hpp"
#include "twosource/regularity.hpp"
#include "twosource/splitmix.hpp"

using namespace twosource;

namespace {

ColorTable xor_table(unsigned n) {
  return ColorTable::from_function(n, n, [](std::uint64_t u, std::uint64_t v) { return u ^ v; });
}

Subset all_strings(unsigned n) {
  Subset s;
  for (std::uint64_t i = 0; i < (std::uint64_t{1} << n); ++i) s.push_back(i);
  return s;
}

}  // namespace

TEST_CASE("colex order and successor") {
  Subset s{0, 1};
  std::vector<Subset> seen{s};
  while (next_colex_subset(s, 4)) seen.push_back(s);
  const std::vector<Subset> expected{{0, 1}, {0, 2}, {1, 2}, {0, 3}, {1, 3}, {2, 3}};
  CHECK(seen == expected);
  for (std::size_t i = 1; i < seen.size(); ++i) CHECK(colex_less(seen[i - 1], seen[i]));
  CHECK_FALSE(colex_less(Subset{1, 2}, Subset{1, 2}));
  CHECK(binomial(16, 4) == 1820);
  CHECK(binomial(4, 2) == 6);
}

TEST_CASE("random_table shape and determinism") {
  const auto t1 = random_table(1, 1, 1);
  CHECK(t1.cells().size() == 4);
  CHECK(t1 == random_table(1, 1, 1));
  const auto t2 = random_table(4, 2, 5);
  CHECK(t2.cells().size() == 256);
  for (auto c : t2.cells()) CHECK(c < 4);
  CHECK_FALSE(t2 == random_table(4, 2, 6));
}

TEST_CASE("random_table equals the implicit view cell by cell") {
  const auto t = random_table(5, 3, 99);
  const RandomTableView view(5, 3, 99);
  for (std::uint64_t u = 0; u < 32; ++u) {
    for (std::uint64_t v = 0; v < 32; ++v) REQUIRE(t.at(u, v) == view.color(u, v));
  }
}

TEST_CASE("random_table colors are close to uniform") {
  // 4096 cells over 4 colors: each count ~ Binomial(4096, 1/4), sd = sqrt(768).
  const auto t = random_table(6, 2, 3);
  std::array<int, 4> counts{};
  for (auto c : t.cells()) ++counts[c];
  for (int c : counts) CHECK(std::abs(c - 1024) <= 4 * std::sqrt(768.0));
}

TEST_CASE("color_load examples") {
  const auto constant = ColorTable::constant(2, 2, 0);
  const Subset all = all_strings(2);
  CHECK(color_load(constant, 0, all, all) == 16);
  CHECK(color_load(constant, 1, all, all) == 0);
  CHECK(color_load(xor_table(2), 0, Subset{0, 1}, Subset{0, 1}) == 2);
}

TEST_CASE("load conservation over random rectangles") {
  SplitMix64 rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    const unsigned n = 1 + static_cast<unsigned>(rng.below(5));
    const unsigned m = 1 + static_cast<unsigned>(rng.below(3));
    const auto f = random_table(n, m, rng.next());
    const Subset rows = sample_subset(rng, 1U << n, 1 + rng.below(1U << n));
    const Subset cols = sample_subset(rng, 1U << n, 1 + rng.below(1U << n));
    std::uint64_t total = 0;
    for (std::uint64_t a = 0; a < (1U << m); ++a) total += color_load(f, a, rows, cols);
    REQUIRE(total == rows.size() * cols.size());
  }
}

TEST_CASE("exact check agrees with brute-force enumeration") {
  SplitMix64 rng(7);
  int compared = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const unsigned n = 2 + static_cast<unsigned>(rng.below(2));
    const unsigned m = 1 + static_cast<unsigned>(rng.below(3));
    const auto f = random_table(n, m, rng.next());
    for (unsigned k1 = 1; k1 <= n; ++k1) {
      for (unsigned k2 = 1; k2 <= n; ++k2) {
        const auto report = check_regularity_strong(f, Rational(1, 3), 2, k1, k2);
        const auto naive = oracle::naive_max_load(f, k1, k2);
        REQUIRE(report.witness.has_value());
        REQUIRE(report.witness->load == naive.max_load);
        REQUIRE(oracle::to_mask(report.witness->rows) == naive.rows_mask);
        REQUIRE(oracle::to_mask(report.witness->cols) == naive.cols_mask);
        REQUIRE(report.witness->color == naive.color);
        REQUIRE(report.rectangles_checked == naive.rectangles);
        REQUIRE(color_load(f, report.witness->color, report.witness->rows, report.witness->cols) ==
                naive.max_load);
        ++compared;
      }
    }
  }
  CHECK(compared > 100);
}

TEST_CASE("weak check examples") {
  SUBCASE("m = 1, c = 2 is vacuous") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto r = check_weak_regularity(random_table(3, 1, seed), Rational(1, 2), 2);
      CHECK(r.pass);
      CHECK(r.max_load_ratio <= 2);
    }
  }
  SUBCASE("constant table fails with load 4 > 2") {
    const auto r = check_weak_regularity(ColorTable::constant(2, 2, 0), Rational(1, 2), 2);
    CHECK_FALSE(r.pass);
    CHECK(r.k1 == 1);
    REQUIRE(r.witness);
    CHECK(r.witness->load == 4);
    CHECK(r.max_load_ratio == 4);
    // Colex-least rectangle: rows {0,1}, cols {0,1}, color 0.
    CHECK(r.witness->rows == Subset{0, 1});
    CHECK(r.witness->cols == Subset{0, 1});
    CHECK(r.witness->color == 0);
  }
  SUBCASE("xor passes on all 36 rectangles") {
    const auto r = check_weak_regularity(xor_table(2), Rational(1, 2), 2);
    CHECK(r.pass);
    CHECK(r.mode == CheckMode::exact);
    CHECK(r.rectangles_checked == 36);
    CHECK(r.witness->load == 2);
    CHECK(r.max_load_ratio == 2);
  }
}

TEST_CASE("weak check refuses over budget") {
  CheckBudget tiny{100};
  CHECK_THROWS_AS(check_weak_regularity(xor_table(2), Rational(1, 2), 2, tiny), BudgetExceeded);
  CHECK(exact_cost(2, 2, 1, 1) == 144);
}

TEST_CASE("strong check examples") {
  SUBCASE("k1 = k2 = n is the whole table") {
    const auto f = random_table(3, 2, 1);
    const auto r = check_regularity_strong(f, Rational(1, 2), 2, 3, 3);
    CHECK(r.rectangles_checked == 1);
    std::array<std::uint64_t, 4> counts{};
    for (auto c : f.cells()) ++counts[c];
    const auto worst = *std::max_element(counts.begin(), counts.end());
    CHECK(r.witness->load == worst);
    CHECK(r.pass == (worst <= 32));  // (2 / 4) * 64
  }
  SUBCASE("xor at (1, 2)") {
    const auto r = check_regularity_strong(xor_table(2), Rational(1, 2), 2, 1, 2);
    CHECK(r.pass);
    CHECK(r.rectangles_checked == 6);
  }
  SUBCASE("constant at (2, 2)") {
    CHECK_FALSE(check_regularity_strong(ColorTable::constant(2, 2, 3), Rational(1, 2), 2, 2, 2).pass);
  }
  CHECK_THROWS(check_regularity_strong(xor_table(2), Rational(1, 2), 2, 0, 2));
  CHECK_THROWS(check_regularity_strong(xor_table(2), Rational(1, 2), 2, 1, 3));
}

TEST_CASE("check_lift") {
  const auto xr = check_lift(xor_table(2), Rational(1, 2), 2);
  CHECK(xr.verdict == LiftVerdict::pass);
  CHECK(xr.strong.size() == 4);
  for (const auto& r : xr.strong) CHECK(r.pass);

  const auto cr = check_lift(ColorTable::constant(2, 2, 0), Rational(1, 2), 2);
  CHECK(cr.verdict == LiftVerdict::weak_fail);
  CHECK(cr.strong.empty());
}

TEST_CASE("weak pass implies strong pass on random tables") {
  // At c = 2 no table of this size passes the weak check; c = 5/2 keeps the
  // implication from being vacuous.
  for (const Rational& c : {Rational(2), Rational(5, 2)}) {
    int weak_passes = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const auto r = check_lift(random_table(3, 2, seed), Rational(2, 3), c);
      REQUIRE(r.verdict != LiftVerdict::lemma_violation);
      if (r.verdict == LiftVerdict::pass) ++weak_passes;
    }
    if (c == 2) CHECK(weak_passes == 0);
    else CHECK(weak_passes > 50);
  }
}

TEST_CASE("vacuity and monotonicity in c") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto f = random_table(3, 2, seed);
    CHECK(check_weak_regularity(f, Rational(1, 2), 4).pass);
    const auto at2 = check_weak_regularity(f, Rational(1, 2), 2);
    const auto at3 = check_weak_regularity(f, Rational(1, 2), 3);
    if (at2.pass) CHECK(at3.pass);
    CHECK(at2.max_load_ratio == at3.max_load_ratio);
  }
}

TEST_CASE("sampled check") {
  SUBCASE("exhaustive sampling matches exact verdict on xor") {
    const auto exact = check_weak_regularity(xor_table(2), Rational(1, 2), 2);
    const auto sampled = check_regularity_sampled(xor_table(2), Rational(1, 2), 2, 36, 0);
    CHECK(sampled.mode == CheckMode::sampled);
    CHECK(sampled.grade() == "evidence");
    CHECK(sampled.exhaustive);
    CHECK(sampled.pass == exact.pass);
    CHECK(sampled.max_load_ratio == exact.max_load_ratio);
    CHECK(sampled.witness->rows == exact.witness->rows);
    CHECK(sampled.witness->cols == exact.witness->cols);
    CHECK(sampled.witness->color == exact.witness->color);
  }
  SUBCASE("exhaustive sampling matches exact on random tables") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto f = random_table(2, 2, seed);
      const auto exact = check_weak_regularity(f, Rational(1, 2), 2);
      const auto sampled = check_regularity_sampled(f, Rational(1, 2), 2, 1000, 0);
      CHECK(sampled.pass == exact.pass);
      CHECK(sampled.max_load_ratio == exact.max_load_ratio);
    }
  }
  SUBCASE("trials = 0 is an error") {
    CHECK_THROWS(check_regularity_sampled(xor_table(2), Rational(1, 2), 2, 0, 0));
  }
  SUBCASE("one rectangle fails a constant table") {
    const auto r = check_regularity_sampled(ColorTable::constant(4, 2, 1), Rational(1, 2), 2, 1, 9);
    CHECK_FALSE(r.pass);
    CHECK(r.rectangles_checked == 1);
  }
  SUBCASE("deterministic in seed, works on implicit tables") {
    const RandomTableView view(20, 3, 5);
    const auto a = check_regularity_sampled(view, Rational(1, 10), 2, 50, 1);
    const auto b = check_regularity_sampled(view, Rational(1, 10), 2, 50, 1);
    CHECK(a.max_load_ratio == b.max_load_ratio);
    CHECK(a.witness->rows == b.witness->rows);
    CHECK(a.rectangles_checked == 50);
  }
}

TEST_CASE("find_regular") {
  SUBCASE("m = 1 passes on the first candidate") {
    for (std::uint64_t seed : {0ULL, 17ULL, 12345ULL}) {
      const auto found = find_regular(2, 1, Rational(1, 2), 2, seed);
      CHECK(found.candidates_tried == 1);
      CHECK(found.candidate_seed == seed);
      CHECK(found.report.pass);
    }
  }
  SUBCASE("n = 4, m = 2 finds an exact certificate at c = 7/2") {
    const auto found = find_regular(4, 2, Rational(1, 2), Rational(7, 2), 0);
    CHECK(found.report.pass);
    CHECK(found.report.mode == CheckMode::exact);
    CHECK(found.report.k1 == 2);
    CHECK(found.table == random_table(4, 2, found.candidate_seed));
    const auto again = find_regular(4, 2, Rational(1, 2), Rational(7, 2), 0);
    CHECK(again.table == found.table);
    CHECK(again.candidates_tried == found.candidates_tried);
  }
  SUBCASE("n = 4, m = 2 at c = 2 exhausts its budget") {
    SearchOptions options;
    options.budget = 300;
    try {
      find_regular(4, 2, Rational(1, 2), 2, 0, options);
      FAIL("expected SearchExhausted");
    } catch (const SearchExhausted& e) {
      CHECK(e.best().candidates_tried == 300);
      CHECK(e.best().report.max_load_ratio >= 3);
    }
  }
  SUBCASE("c = 1 demands exact balance and exhausts a small budget") {
    SearchOptions options;
    options.budget = 50;
    try {
      find_regular(2, 2, Rational(1, 2), 1, 0, options);
      FAIL("expected SearchExhausted");
    } catch (const SearchExhausted& e) {
      CHECK(e.best().candidates_tried == 50);
      CHECK_FALSE(e.best().report.pass);
    }
  }
}

TEST_CASE("regularity_attainable") {
  CHECK(regularity_attainable(2, 1, Rational(1, 2), 2));
  CHECK_FALSE(regularity_attainable(2, 4, Rational(1, 4), 2));  // 2 * 4 / 16 < 1
  CHECK_FALSE(regularity_attainable(8, 9, Rational(1, 4), 2));
  CHECK(regularity_attainable(4, 3, Rational(1, 2), 2));
}

TEST_CASE("preimage_bound_check") {
  const auto f = random_table(3, 2, 4);
  const Subset all = all_strings(3);
  SUBCASE("all colors") {
    const auto r = preimage_bound_check(f, {0, 1, 2, 3}, all, all, 1);
    CHECK(r.holds);
    CHECK(r.count == 64);
    CHECK(r.bound == 64);
  }
  SUBCASE("singleton agrees with color_load") {
    const Subset rows{1, 4, 6, 7};
    const Subset cols{0, 2, 3, 5};
    for (std::uint64_t a = 0; a < 4; ++a) {
      const auto r = preimage_bound_check(f, {a}, rows, cols, 2);
      CHECK(r.count == color_load(f, a, rows, cols));
      CHECK(r.bound == 8);
    }
  }
  CHECK_THROWS(preimage_bound_check(f, {}, all, all, 2));
  CHECK_THROWS(preimage_bound_check(f, {1, 1}, all, all, 2));
}

TEST_CASE("table files round trip and fingerprint by content") {
  const auto dir = std::filesystem::temp_directory_path() / "twosource_test_tables";
  std::filesystem::create_directories(dir);
  const auto t = random_table(3, 3, 8);
  write_table_file(dir / "t.txt", t);
  const auto back = read_table_file(dir / "t.txt");
  CHECK(back == t);
  CHECK(back.fingerprint() == t.fingerprint());
  CHECK(t.serialize().rfind("regfn n=3 m=3\n", 0) == 0);
  CHECK_THROWS_AS(parse_table("regfn n=1 m=1\n0\n1\n"), ParseError);
  CHECK_THROWS_AS(parse_table("regfn n=1 m=1\n0\n1\n2\n0\n"), ParseError);
  CHECK_THROWS_AS(parse_table("table n=1 m=1\n"), ParseError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("xor table file layout: rows outer, colex order, m-bit colors") {
  const std::string text = xor_table(1).serialize();
  CHECK(text == "regfn n=1 m=1\n0\n1\n1\n0\n");
  const auto x2 = xor_table(2);
  CHECK(x2.apply(load_bits("01"), load_bits("11")).to_string() == "10");
}

TEST_CASE("report JSON fields") {
  const auto j = report_to_json(check_weak_regularity(ColorTable::constant(2, 2, 0), Rational(1, 2), 2));
  CHECK(j["verdict"] == "fail");
  CHECK(j["mode"] == "exact");
  CHECK(j["grade"] == "certificate");
  CHECK(j["max_load_ratio"] == "4");
  CHECK(j["witness"]["load"] == 4);
  CHECK(j["rectangles_checked"] == 36);
}
