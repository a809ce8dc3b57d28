// Copyright The fav authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>
#include <vector>

#include "fav/ast.hpp"
#include "fav/composer.hpp"
#include "fav/feature_model.hpp"
#include "fav/spec_lang.hpp"

namespace fav {

/// Variability-encoded product line. `program.feature_variables` lists the
/// feature variables in feature-model order.
struct Simulator {
  Program program;
  std::vector<std::string> features;
  std::map<std::string, std::string> variable_of;  // feature -> global
  std::string feature_model_function;
};

/// Builds the simulator: one bool global per feature, renamed layers
/// `m$F`, dispatchers (`m` on top, `m$$F` in between), a predicate
/// returning the DNF of fm, and a guarded entry body.
Simulator var_enc(const std::vector<FeatureModule>& modules, const FeatureModel& fm);

/// Fixes every feature variable to p's membership. The result has no
/// feature variables left.
Program select(const Simulator& s, const Product& p);

/// Weaves every feature's automata, each hook guarded by its feature variable.
Simulator weave_simulator(const Simulator& s, const SpecificationSet& specs);

/// Weaves only the given automata (still feature-guarded).
Simulator weave_simulator(const Simulator& s, const std::vector<OwnedAutomaton>& automata);

}  // namespace fav
