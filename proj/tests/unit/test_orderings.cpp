// Copyright The fav authors
// SPDX-License-Identifier: Apache-2.0

#include <random>

#include "doctest.h"
#include "fav/orderings.hpp"
#include "support/naive_orderings.hpp"

using namespace fav;

namespace {

RuntimeTable table(const std::vector<std::pair<double, bool>>& rows) {
  RuntimeTable rt;
  for (std::size_t i = 0; i < rows.size(); ++i)
    rt.push_back({Product{"P" + std::to_string(i)}, rows[i].second, rows[i].first});
  return rt;
}

void same_stats(const PermutationStats& a, const PermutationStats& b) {
  CHECK(a.min == doctest::Approx(b.min));
  CHECK(a.q1 == doctest::Approx(b.q1));
  CHECK(a.median == doctest::Approx(b.median));
  CHECK(a.q3 == doctest::Approx(b.q3));
  CHECK(a.max == doctest::Approx(b.max));
  CHECK(a.mean == doctest::Approx(b.mean));
}

}  // namespace

TEST_CASE("quantile7") {
  CHECK(quantile7({1, 2, 3, 4}, 0.25) == doctest::Approx(1.75));
  CHECK(quantile7({1, 2, 3, 4}, 0.5) == doctest::Approx(2.5));
  CHECK(quantile7({1, 2, 3, 4}, 1.0) == doctest::Approx(4));
  CHECK(quantile7({7}, 0.75) == doctest::Approx(7));
}

TEST_CASE("three candidates, one violating") {
  // Orderings cost 1, 1, 3, 4, 6, 6.
  PermutationStats s = analyze_orderings(table({{1, true}, {2, false}, {3, false}}));
  CHECK(s.exact);
  CHECK(s.b == 1);
  CHECK(s.n == 3);
  CHECK(s.hit_probability == doctest::Approx(1.0 / 3));
  CHECK(s.min == doctest::Approx(1));
  CHECK(s.q1 == doctest::Approx(1.5));
  CHECK(s.median == doctest::Approx(3.5));
  CHECK(s.q3 == doctest::Approx(5.5));
  CHECK(s.max == doctest::Approx(6));
  CHECK(s.mean == doctest::Approx(3.5));
  double total = 0;
  for (const auto& [cost, prob] : s.distribution) total += prob;
  CHECK(total == doctest::Approx(1));
  REQUIRE(s.distribution.size() == 4);
  CHECK(s.distribution.front().first == doctest::Approx(1));
  CHECK(s.distribution.front().second == doctest::Approx(1.0 / 3));
}

TEST_CASE("degenerate tables") {
  PermutationStats none = analyze_orderings(table({{2, false}, {5, false}}));
  CHECK(none.b == 0);
  CHECK(none.min == doctest::Approx(7));
  CHECK(none.max == doctest::Approx(7));
  PermutationStats all = analyze_orderings(table({{2, true}, {5, true}}));
  CHECK(all.min == doctest::Approx(2));
  CHECK(all.max == doctest::Approx(5));
  CHECK(all.mean == doctest::Approx(3.5));
  PermutationStats one = analyze_orderings(table({{4, true}}));
  CHECK(one.n == 1);
  CHECK(one.median == doctest::Approx(4));
  CHECK_THROWS_AS(analyze_orderings(RuntimeTable{}), FavError);
}

TEST_CASE("exact route matches enumerating every ordering") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t n = 1 + rng() % 7;
    RuntimeTable rt;
    for (std::size_t i = 0; i < n; ++i)
      rt.push_back({Product{"P" + std::to_string(i)}, rng() % 3 == 0, static_cast<double>(1 + rng() % 20)});
    same_stats(analyze_orderings_exact(rt), testsupport::naive_ordering_stats(rt));
  }
}

TEST_CASE("one class per candidate reproduces the exact route") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t n = 1 + rng() % 7;
    RuntimeTable rt;
    for (std::size_t i = 0; i < n; ++i)
      rt.push_back({Product{"P" + std::to_string(i)}, rng() % 2 == 0, static_cast<double>(1 + rng() % 50)});
    PermutationStats c = analyze_orderings_classes(rt, n);
    CHECK_FALSE(c.exact);
    same_stats(c, analyze_orderings_exact(rt));
  }
}

TEST_CASE("large tables take the class route") {
  RuntimeTable rt;
  for (int i = 0; i < 30; ++i) rt.push_back({Product{"P" + std::to_string(i)}, i % 10 == 0, 1.0 + i});
  PermutationStats s = analyze_orderings(rt, 10, 5);
  CHECK_FALSE(s.exact);
  CHECK(s.b == 3);
  CHECK(s.n == 30);
  CHECK(s.min >= 1.0);
  CHECK(s.max <= 465.0);
  CHECK(s.min <= s.q1);
  CHECK(s.q1 <= s.median);
  CHECK(s.median <= s.q3);
  CHECK(s.q3 <= s.max);
}
