// Copyright The fav authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string_view>

#include "fav/ast.hpp"

namespace fav {

/// Parses one `.fml` feature module. `name` is used when the file has no
/// `feature Name;` header; if both are present they must agree.
/// Throws SyntaxError (with line/column) on syntax or duplicate-name errors.
FeatureModule parse_feature_module(std::string_view source, std::string_view name = {});

/// Parses the flat program text produced by pretty_print(Program). Accepts
/// the reserved characters of generated names (`$`, `::`) and `fail`.
Program parse_program(std::string_view source);

}  // namespace fav
