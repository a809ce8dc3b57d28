// Copyright The fav authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "fav/ast.hpp"

namespace fav {

struct ShadowDecl {
  std::string target_record;
  std::vector<FieldDecl> added_fields;
  SourceLoc loc;
  bool operator==(const ShadowDecl&) const = default;
};

enum class InterceptPosition { Before, After };

/// A typed parameter pattern of an event signature; `_` matches anything.
struct ParamPattern {
  std::string name;  // "_" for wildcard
  Type type;
  bool operator==(const ParamPattern&) const = default;
};

struct Intercept {
  InterceptPosition position = InterceptPosition::Before;
  std::string return_binding;  // After only, empty if absent
  Type ret;
  std::string function;
  std::vector<ParamPattern> params;
  std::vector<Stmt> body;
  SourceLoc loc;
  bool operator==(const Intercept&) const = default;
};

/// Feature-local safety observer: private state plus before/after hooks.
struct Automaton {
  std::string name;
  bool has_introduction = false;
  std::vector<ShadowDecl> shadows;
  std::vector<RecordDecl> records;
  std::vector<GlobalDecl> globals;
  std::vector<FunctionDecl> functions;
  std::vector<Intercept> intercepts;
  SourceLoc loc;
  bool operator==(const Automaton&) const = default;
};

/// Automata of each feature, in declaration order.
using SpecificationSet = std::map<std::string, std::vector<Automaton>>;

Automaton parse_automaton(std::string_view source);
/// A spec file holds one or more automata.
std::vector<Automaton> parse_spec_file(std::string_view source);

std::string site_label(const Automaton& a, std::size_t intercept_index);

struct SideEffectViolation {
  std::string automaton;
  std::string where;   // intercept or function
  std::string target;  // printed lhs / callee
  SourceLoc loc;
};

struct SideEffectReport {
  std::vector<SideEffectViolation> violations;
  bool ok() const { return violations.empty(); }
};

/// Every write in an intercept body (or in an automaton function it calls)
/// must target a shadow field, automaton-introduced state, or a local.
/// Allocation is only allowed for automaton-introduced records. Program
/// functions called from a body must be pure; that part is checked by
/// weave() against the composed program.
SideEffectReport check_side_effect_freedom(const Automaton& a,
                                           const std::vector<RecordDecl>& program_records,
                                           const std::vector<GlobalDecl>& program_globals = {});

/// Internal (namespaced) name of automaton-private element `name`.
inline std::string private_name(const std::string& automaton, const std::string& name) {
  return automaton + "::" + name;
}

}  // namespace fav
