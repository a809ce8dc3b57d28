// Copyright The fav authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "fav/feature_model.hpp"

namespace fav {

struct RuntimeEntry {
  Product product;
  bool violating = false;
  double runtime = 0;
};

/// One entry per candidate product.
using RuntimeTable = std::vector<RuntimeEntry>;

/// Distribution of the total cost of checking candidates in a random
/// order until the first violating product (or all of them if none).
struct PermutationStats {
  double min = 0, q1 = 0, median = 0, q3 = 0, max = 0, mean = 0;
  std::size_t b = 0;  // violating candidates
  std::size_t n = 0;  // candidates
  double hit_probability = 0;  // b / n
  bool exact = true;
  /// (total cost, probability), ascending by cost.
  std::vector<std::pair<double, double>> distribution;
};

/// Exact when n <= exact_limit, otherwise runtimes are grouped into
/// class_count rank-contiguous classes of (nearly) equal size, each
/// represented by its mean. Throws FavError on an empty table.
PermutationStats analyze_orderings(const RuntimeTable& rt, std::size_t exact_limit = 10, std::size_t class_count = 5);

/// Exact route regardless of size (n <= 24).
PermutationStats analyze_orderings_exact(const RuntimeTable& rt);

/// Class route regardless of size.
PermutationStats analyze_orderings_classes(const RuntimeTable& rt, std::size_t class_count);

/// Type-7 quantile of a sorted sample.
double quantile7(const std::vector<double>& sorted, double p);

}  // namespace fav
