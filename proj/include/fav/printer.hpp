// Copyright The fav authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "fav/ast.hpp"
#include "fav/spec_lang.hpp"

namespace fav {

std::string print_expr(const Expr& e);
std::string print_type(const Type& t);
/// One-line rendering of a statement (compound statements show their head).
std::string print_stmt_head(const Stmt& s);

/// Emits text that re-parses to a structurally identical AST.
std::string pretty_print(const FeatureModule& m);
std::string pretty_print(const Program& p);
std::string pretty_print(const Automaton& a);

}  // namespace fav
