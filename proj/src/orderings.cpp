// Copyright The fav authors
// SPDX-License-Identifier: Apache-2.0

#include "fav/orderings.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>

#include "fav/ast.hpp"

namespace fav {

namespace {

using Dist = std::map<long double, long double>;  // cost -> number of permutations

std::vector<long double> factorials(std::size_t n) {
  std::vector<long double> f(n + 1, 1.0L);
  for (std::size_t i = 1; i <= n; ++i) f[i] = f[i - 1] * static_cast<long double>(i);
  return f;
}

long double binomial(std::size_t n, std::size_t k) {
  long double r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<long double>(n - k + i) / static_cast<long double>(i);
  return std::round(r);
}

/// Value at 0-based rank `r` of the weighted multiset.
long double at_rank(const Dist& d, long double r) {
  long double seen = 0;
  for (const auto& [v, w] : d) {
    seen += w;
    if (r < seen) return v;
  }
  return d.rbegin()->first;
}

long double weighted_q7(const Dist& d, long double total, long double p) {
  long double h = (total - 1) * p;
  long double lo = std::floor(h);
  long double a = at_rank(d, lo);
  if (h == lo) return a;
  long double b = at_rank(d, lo + 1);
  return a + (h - lo) * (b - a);
}

PermutationStats summarize(const Dist& d, std::size_t n, std::size_t b, bool exact) {
  long double total = 0, sum = 0;
  for (const auto& [v, w] : d) {
    total += w;
    sum += v * w;
  }
  PermutationStats s;
  s.n = n;
  s.b = b;
  s.hit_probability = static_cast<double>(b) / static_cast<double>(n);
  s.exact = exact;
  s.min = static_cast<double>(d.begin()->first);
  s.max = static_cast<double>(d.rbegin()->first);
  s.q1 = static_cast<double>(weighted_q7(d, total, 0.25L));
  s.median = static_cast<double>(weighted_q7(d, total, 0.5L));
  s.q3 = static_cast<double>(weighted_q7(d, total, 0.75L));
  s.mean = static_cast<double>(sum / total);
  for (const auto& [v, w] : d) s.distribution.emplace_back(static_cast<double>(v), static_cast<double>(w / total));
  return s;
}

void require_nonempty(const RuntimeTable& rt) {
  if (rt.empty()) throw FavError("ordering analysis needs at least one candidate");
}

std::size_t count_violating(const RuntimeTable& rt) {
  return static_cast<std::size_t>(std::count_if(rt.begin(), rt.end(), [](const auto& e) { return e.violating; }));
}

long double total_runtime(const RuntimeTable& rt) {
  long double t = 0;
  for (const auto& e : rt) t += e.runtime;
  return t;
}

}  // namespace

PermutationStats analyze_orderings_exact(const RuntimeTable& rt) {
  require_nonempty(rt);
  const std::size_t n = rt.size();
  if (n > 24) throw FavError("exact ordering analysis supports at most 24 candidates");
  const std::size_t b = count_violating(rt);
  Dist d;
  if (b == 0) {
    d[total_runtime(rt)] = factorials(n)[n];
    return summarize(d, n, b, true);
  }
  std::vector<long double> safe;
  for (const auto& e : rt)
    if (!e.violating) safe.push_back(e.runtime);
  const auto f = factorials(n);
  // Permutations whose first violating product is v, preceded by exactly
  // the safe subset S: |S|! * (n - |S| - 1)!.
  Dist prefix;
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << safe.size()); ++mask) {
    long double s = 0;
    for (std::size_t i = 0; i < safe.size(); ++i)
      if ((mask >> i) & 1u) s += safe[i];
    auto k = static_cast<std::size_t>(std::popcount(mask));
    prefix[s] += f[k] * f[n - k - 1];
  }
  for (const auto& e : rt) {
    if (!e.violating) continue;
    for (const auto& [s, w] : prefix) d[e.runtime + s] += w;
  }
  return summarize(d, n, b, true);
}

PermutationStats analyze_orderings_classes(const RuntimeTable& rt, std::size_t class_count) {
  require_nonempty(rt);
  if (class_count == 0) throw FavError("class count must be at least 1");
  const std::size_t n = rt.size();
  const std::size_t b = count_violating(rt);
  const std::size_t classes = std::min(class_count, n);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return rt[x].runtime < rt[y].runtime; });

  struct Class {
    long double rep = 0;
    std::size_t violating = 0, safe = 0;
  };
  std::vector<Class> cls(classes);
  std::size_t pos = 0;
  for (std::size_t c = 0; c < classes; ++c) {
    std::size_t size = n / classes + (c < n % classes ? 1 : 0);
    long double sum = 0;
    for (std::size_t i = 0; i < size; ++i, ++pos) {
      const auto& e = rt[order[pos]];
      sum += e.runtime;
      (e.violating ? cls[c].violating : cls[c].safe)++;
    }
    cls[c].rep = sum / static_cast<long double>(size);
  }

  Dist d;
  const auto f = factorials(n);
  if (b == 0) {
    long double t = 0;
    for (const auto& c : cls) t += c.rep * static_cast<long double>(c.safe);
    d[t] = f[n];
    return summarize(d, n, b, false);
  }
  // Enumerate how many safe products of each class precede the first violation.
  std::vector<std::size_t> k(classes, 0);
  for (;;) {
    long double mult = 1, base = 0;
    std::size_t s = 0;
    for (std::size_t c = 0; c < classes; ++c) {
      mult *= binomial(cls[c].safe, k[c]);
      base += static_cast<long double>(k[c]) * cls[c].rep;
      s += k[c];
    }
    for (const auto& c : cls)
      if (c.violating) d[c.rep + base] += static_cast<long double>(c.violating) * mult * f[s] * f[n - s - 1];
    std::size_t c = 0;
    while (c < classes && k[c] == cls[c].safe) k[c++] = 0;
    if (c == classes) break;
    ++k[c];
  }
  return summarize(d, n, b, false);
}

PermutationStats analyze_orderings(const RuntimeTable& rt, std::size_t exact_limit, std::size_t class_count) {
  require_nonempty(rt);
  if (rt.size() <= exact_limit && rt.size() <= 24) return analyze_orderings_exact(rt);
  return analyze_orderings_classes(rt, class_count);
}

double quantile7(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw FavError("quantile of an empty sample");
  long double h = static_cast<long double>(sorted.size() - 1) * p;
  auto lo = static_cast<std::size_t>(std::floor(h));
  long double a = sorted[lo];
  if (h == static_cast<long double>(lo)) return static_cast<double>(a);
  return static_cast<double>(a + (h - static_cast<long double>(lo)) * (sorted[lo + 1] - a));
}

}  // namespace fav
