// Copyright The fav authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "fav/ast.hpp"
#include "fav/feature_model.hpp"

namespace fav {

/// Type errors of a flat program, one message per offending reference.
std::vector<std::string> typecheck_program(const Program& p);

struct TypeIssue {
  Product product;
  std::string message;
};

struct TypeReport {
  std::vector<TypeIssue> issues;
  bool ok() const { return issues.empty(); }
};

/// Composes every valid product and type checks it.
TypeReport typecheck_product_line(const std::vector<FeatureModule>& modules, const FeatureModel& fm);

}  // namespace fav
