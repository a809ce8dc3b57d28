// Copyright The fav authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <set>
#include <string>

#include "fav/ast.hpp"
#include "fav/checker.hpp"

namespace fav::testsupport {

/// Outcomes of all executions of a program, collected by a direct AST
/// interpreter that re-runs the program once per choice sequence.
struct OracleOutcomes {
  std::set<std::string> fails;   // fail labels
  std::set<std::string> faults;  // fault messages
  std::set<std::string> bounds;  // bound kinds
  bool normal = false;
  std::uint64_t executions = 0;
  bool complete = true;  // false if the execution limit cut enumeration short
};

/// Feature variables of a simulator range over every assignment that sets
/// opts.required_features.
OracleOutcomes enumerate_executions(const Program& p, const CheckOptions& opts = {},
                                    std::uint64_t max_executions = 200000);

/// Empty if `v` is the verdict the outcomes call for, else a description.
std::string compare_with_oracle(const OracleOutcomes& o, const Verdict& v);

}  // namespace fav::testsupport
