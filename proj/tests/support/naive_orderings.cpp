// Copyright The fav authors
// SPDX-License-Identifier: Apache-2.0

#include "support/naive_orderings.hpp"

#include <algorithm>
#include <numeric>

namespace fav::testsupport {

namespace {

// Type-7 sample quantile, as in R's default.
double q7(const std::vector<double>& x, double p) {
  long double h = static_cast<long double>(x.size() - 1) * p;
  auto j = static_cast<std::size_t>(h);
  long double g = h - static_cast<long double>(j);
  if (g == 0) return x[j];
  return static_cast<double>(x[j] + g * (x[j + 1] - x[j]));
}

}  // namespace

std::vector<double> naive_ordering_costs(const RuntimeTable& rt) {
  std::vector<std::size_t> perm(rt.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<double> costs;
  do {
    double cost = 0;
    for (std::size_t i : perm) {
      cost += rt[i].runtime;
      if (rt[i].violating) break;
    }
    costs.push_back(cost);
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::sort(costs.begin(), costs.end());
  return costs;
}

PermutationStats naive_ordering_stats(const RuntimeTable& rt) {
  auto costs = naive_ordering_costs(rt);
  PermutationStats s;
  s.n = rt.size();
  s.b = static_cast<std::size_t>(std::count_if(rt.begin(), rt.end(), [](const auto& e) { return e.violating; }));
  s.min = costs.front();
  s.max = costs.back();
  s.q1 = q7(costs, 0.25);
  s.median = q7(costs, 0.5);
  s.q3 = q7(costs, 0.75);
  long double sum = 0;
  for (double c : costs) sum += c;
  s.mean = static_cast<double>(sum / static_cast<long double>(costs.size()));
  return s;
}

}  // namespace fav::testsupport
