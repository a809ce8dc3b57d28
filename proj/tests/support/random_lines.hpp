// Copyright The fav authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <random>
#include <string>

#include "fav/feature_model.hpp"
#include "fav/harness.hpp"

namespace fav::testsupport {

using Rng = std::mt19937_64;

/// A generated product line together with the sources it was parsed from.
struct RandomLine {
  ProductLine line;
  std::map<std::string, std::string> sources;  // file name -> text
  std::string dump() const;
};

/// Random type-safe line with up to `max_features` features: a base with
/// a few int functions, features refining random subsets of them (so
/// refinement chains form), random specifications, and a random
/// constraint-based feature model.
RandomLine random_line(Rng& rng, int max_features = 6);

/// Random feature model over `features` features, given either as a
/// constraint formula or as a product list.
FeatureModel random_feature_model(Rng& rng, int features);

/// Random bool formula over the given names.
Formula random_formula(Rng& rng, const std::vector<std::string>& names, int depth);

}  // namespace fav::testsupport
