// Copyright The fav authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fav/ast.hpp"
#include "fav/checker.hpp"
#include "fav/feature_model.hpp"
#include "fav/orderings.hpp"
#include "fav/spec_lang.hpp"

namespace fav {

struct InteractionExpectation {
  int id = 0;
  std::string feature_a, feature_b;
  std::string owner;      // feature whose automaton fails
  std::string automaton;
  bool operator==(const InteractionExpectation&) const = default;
};

struct ProductLine {
  FeatureModel fm;
  std::vector<FeatureModule> modules;  // composition order
  SpecificationSet specs;              // feature -> automata
  std::vector<InteractionExpectation> expectations;
};

/// Reads a manifest:
///   features <file.fm>
///   module <Feature> <file.fml>       (composition order, bottom first)
///   spec <Feature> <file.spec>
///   expect <id> <featA> <featB> <owner> <automaton>
/// Paths are relative to the manifest. `#` starts a comment.
ProductLine load_line(const std::filesystem::path& manifest);

/// One (product, automaton) check.
struct ProductTask {
  Product product;
  std::string feature;
  std::string automaton;
  Verdict verdict;
  CheckMetrics metrics;
  double generation_seconds = 0;  // compose + weave
};

/// Checks every valid product against the automata of each of its
/// features, one automaton at a time. Tasks are ordered by product
/// (canonical order), then feature, then automaton.
std::vector<ProductTask> verify_brute_force(const ProductLine& line, const CheckOptions& opts = {});

/// Sequential reference for verify_brute_force; identical results.
std::vector<ProductTask> verify_brute_force_serial(const ProductLine& line, const CheckOptions& opts = {});

struct SimulatorTask {
  std::string feature;
  std::string automaton;
  Verdict verdict;
  Product selection;  // valid product of the counterexample, if any
  CheckMetrics metrics;
  double generation_seconds = 0;  // encode + weave
};

/// Checks the simulator against each automaton, with the automaton's
/// feature required to be selected.
std::vector<SimulatorTask> verify_simulator(const ProductLine& line, const CheckOptions& opts = {});

enum class CostKind { States, Wallclock };

double cost_of(const CheckMetrics& m, CostKind k);

struct InteractionRow {
  std::string feature;
  std::string automaton;
  std::optional<int> expected_id;
  double simulator_cost = 0;
  VerdictKind simulator_verdict = VerdictKind::Safe;
  Product simulator_selection;
  std::size_t candidates = 0;
  std::size_t violating = 0;
  double brute_total = 0;  // sum over all candidates
  std::vector<Product> violating_products;
  std::optional<PermutationStats> detection;  // when violating > 0
  double brute_generation_seconds = 0;
  double simulator_generation_seconds = 0;
};

struct ComparisonReport {
  CostKind cost = CostKind::States;
  std::vector<InteractionRow> rows;  // one per automaton
};

struct CompareOptions {
  CheckOptions check;
  CostKind cost = CostKind::States;
  std::size_t exact_limit = 10;
  std::size_t class_count = 5;
};

ComparisonReport compare_strategies(const ProductLine& line, const CompareOptions& opts = {});

/// Builds the report from existing results.
ComparisonReport build_report(const ProductLine& line, const std::vector<ProductTask>& brute,
                              const std::vector<SimulatorTask>& sim, const CompareOptions& opts);

/// Tab-separated plot data.
void write_absence_dsv(const ComparisonReport& r, std::ostream& os);
void write_detection_dsv(const ComparisonReport& r, std::ostream& os);
void write_single_dsv(const ComparisonReport& r, std::ostream& os);

/// Outcome of one expected interaction on both strategies.
struct InteractionFinding {
  InteractionExpectation expected;
  std::size_t violating = 0;   // brute-force products violating the automaton
  std::size_t candidates = 0;  // products containing the owner
  bool brute_detected = false;
  bool simulator_detected = false;
  /// Every violating product and the simulator's selection contain both features.
  bool attributed = false;
};

struct InteractionAudit {
  std::vector<InteractionFinding> findings;
  /// "feature/automaton" of violations not covered by an expectation.
  std::vector<std::string> unexpected;
  bool ok() const;
};

InteractionAudit audit_interactions(const ProductLine& line, const std::vector<ProductTask>& brute,
                                    const std::vector<SimulatorTask>& sim);

/// Product from the names of the simulator's selected feature variables.
Product selection_product(const std::vector<std::string>& variables, const std::map<std::string, std::string>& variable_of,
                          const FeatureModel& fm);

}  // namespace fav
