// Copyright The fav authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fav/ast.hpp"

namespace fav {

struct CheckOptions {
  int unroll_bound = 64;
  int call_depth = 64;
  int heap_cells = 4096;
  bool dedup = true;
  /// Simulators only: initial feature assignments must set these bits
  /// (bit i = program.feature_variables[i]).
  std::uint32_t required_features = 0;
};

enum class VerdictKind { Safe, Violation, BoundExceeded, RuntimeFault };
std::string to_string(VerdictKind k);

struct PathStep {
  SourceLoc loc;
  std::string function;
  std::string statement;
  std::string feature;    // contributing feature, from provenance
  std::string condition;  // "[c]" / "[!(c)]" for branches, else empty
  bool operator==(const PathStep&) const = default;
};

struct ErrorPath {
  /// Feature variables set to true (simulators); empty for products.
  std::vector<std::string> selection;
  std::uint32_t selection_mask = 0;
  /// Values of the nondet choices in execution order.
  std::vector<std::int64_t> choices;
  std::vector<PathStep> steps;
  bool operator==(const ErrorPath&) const = default;
};

struct Verdict {
  VerdictKind kind = VerdictKind::Safe;
  std::string label;       // fail label, "Automaton@before f[: text]"
  std::string automaton;   // label prefix before '@'
  std::string detail;      // bound kind or fault message
  ErrorPath path;          // Violation and RuntimeFault only
};

struct CheckMetrics {
  std::uint64_t states_explored = 0;
  std::uint64_t unique_states = 0;
  std::uint64_t peak_frontier = 0;
  double wall_seconds = 0;
};

struct CheckResult {
  Verdict verdict;
  CheckMetrics metrics;
};

/// Explores every execution of a woven program (or simulator, whose
/// feature variables start unconstrained) within the configured bounds.
CheckResult check(const Program& program, const CheckOptions& opts = {});

/// Raised when a path does not reproduce on the given program.
class ReplayDivergence : public FavError {
 public:
  explicit ReplayDivergence(const std::string& msg) : FavError(msg) {}
};

/// Re-executes `path` deterministically. Returns the verdict it reaches;
/// throws ReplayDivergence if it does not end in the recorded outcome.
Verdict replay(const Program& program, const ErrorPath& path, const CheckOptions& opts = {});

/// Numbered listing, one step per line.
std::string render_error_path(const ErrorPath& path);

/// Machine-readable report record.
std::string to_json(const CheckResult& r, int indent = 2);

}  // namespace fav
