// Copyright The fav authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "fav/ast.hpp"
#include "fav/feature_model.hpp"
#include "fav/spec_lang.hpp"

namespace fav {

/// Superimposes the modules of the features in `features` (modules are
/// given in composition order). Lower refinement layers of `m` are renamed
/// `m$<feature>`; the top layer keeps the name `m`. No validity check.
Program compose_features(const std::vector<FeatureModule>& modules, const Product& features);

/// compose_features after checking that p is a valid product of fm.
Program compose(const std::vector<FeatureModule>& modules, const FeatureModel& fm, const Product& p);

/// Automaton together with the feature it specifies.
struct OwnedAutomaton {
  std::string feature;
  const Automaton* automaton;
};

/// Automata of the features selected by p, in feature order, then
/// declaration order.
std::vector<OwnedAutomaton> automata_for(const SpecificationSet& specs, const Product& p);

/// Weaves the automata of every feature in p into the composed program.
Program weave(const Program& composed, const SpecificationSet& specs, const Product& p);

/// Weaves `automata`; when `guard_variables` is set, every hook call is
/// guarded by the global named (*guard_variables)[feature].
Program weave_automata(const Program& program, const std::vector<OwnedAutomaton>& automata,
                       const std::map<std::string, std::string>* guard_variables = nullptr);

/// Provenance sidecar as JSON text.
std::string provenance_json(const Program& p);

}  // namespace fav
