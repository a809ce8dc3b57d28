// Copyright The fav authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "fav/ast.hpp"

namespace fav::detail {

struct TypeError {
  std::string message;
  SourceLoc loc;
};

/// Types function bodies against a flat program. Errors are collected, not
/// thrown. `on_field` sees every field access with the record it resolves
/// against, which lets callers rename or index fields.
class BodyTyper {
 public:
  explicit BodyTyper(const Program& prog) : prog_(prog) {}

  std::function<void(Expr&, const std::string& record)> on_field;
  std::vector<TypeError> errors;

  void check_function(FunctionDecl& f);
  /// Checks a body with the given parameters in scope.
  void check_body(std::vector<Stmt>& body, const std::vector<Param>& params, const Type& ret,
                  const std::string& where);

  bool type_exists(const Type& t) const;

 private:
  Type expr(Expr& e);
  void stmt(Stmt& s);
  void block(std::vector<Stmt>& body);
  const Type* lookup(const std::string& name) const;
  void error(const std::string& msg, SourceLoc loc);

  const Program& prog_;
  std::vector<std::vector<std::pair<std::string, Type>>> scopes_;
  Type ret_;
  std::string where_;
};

bool assignable(const Type& to, const Type& from);

}  // namespace fav::detail
