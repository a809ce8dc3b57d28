// Copyright The fav authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fav {

/// Position in a source file. Locations never take part in structural
/// equality of AST nodes, so every SourceLoc compares equal.
struct SourceLoc {
  int line = 0;
  int column = 0;
  friend bool operator==(const SourceLoc&, const SourceLoc&) { return true; }
};

std::string to_string(const SourceLoc& loc);

/// Error raised by the front ends (lexer, parser, loaders).
class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(const std::string& msg, SourceLoc loc);
  SourceLoc loc() const { return loc_; }

 private:
  SourceLoc loc_;
};

/// Generic error for malformed inputs to the later pipeline stages.
class FavError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class TypeKind { Void, Int, Bool, Symbol, Ref, Null };

/// Semantic type. `record` is only meaningful for Ref.
struct Type {
  TypeKind kind = TypeKind::Void;
  std::string record;

  static Type void_() { return {TypeKind::Void, {}}; }
  static Type int_() { return {TypeKind::Int, {}}; }
  static Type bool_() { return {TypeKind::Bool, {}}; }
  static Type symbol() { return {TypeKind::Symbol, {}}; }
  static Type ref(std::string r) { return {TypeKind::Ref, std::move(r)}; }
  static Type null() { return {TypeKind::Null, {}}; }

  bool operator==(const Type&) const = default;
};

std::string to_string(const Type& t);

enum class ExprKind {
  IntLit,
  BoolLit,
  SymLit,
  NullLit,
  Var,
  Field,     // args[0]->name
  Call,      // name(args)
  Original,  // original(args)
  Nondet,    // nondet(int_value, hi)
  New,       // new name
  Unary,
  Binary,
};

enum class Op { None, Neg, Not, Add, Sub, Mul, Div, Mod, Eq, Ne, Lt, Le, Gt, Ge, And, Or };

std::string_view op_text(Op op);

struct Expr {
  ExprKind kind = ExprKind::IntLit;
  Op op = Op::None;
  std::int64_t int_value = 0;  // IntLit, BoolLit (0/1), Nondet lower bound
  std::int64_t hi = 0;         // Nondet upper bound
  std::string name;            // Var, Field, Call, SymLit text, New record
  std::vector<Expr> args;
  SourceLoc loc;

  bool operator==(const Expr&) const = default;

  static Expr int_lit(std::int64_t v);
  static Expr bool_lit(bool v);
  static Expr sym_lit(std::string text);
  static Expr null_lit();
  static Expr var(std::string name);
  static Expr field(Expr object, std::string field);
  static Expr call(std::string callee, std::vector<Expr> args);
  static Expr original(std::vector<Expr> args);
  static Expr nondet(std::int64_t lo, std::int64_t hi);
  static Expr new_record(std::string record);
  static Expr unary(Op op, Expr operand);
  static Expr binary(Op op, Expr lhs, Expr rhs);
};

enum class StmtKind { VarDecl, Assign, ExprStmt, If, While, Return, Block, Fail };

struct Stmt {
  StmtKind kind = StmtKind::Block;
  Type type;                 // VarDecl
  std::string name;          // VarDecl variable; Fail label
  std::vector<Expr> exprs;   // VarDecl [init], Assign [lhs, rhs], ExprStmt [e], If/While [cond], Return [value]
  std::vector<Stmt> body;    // If then, While body, Block
  std::vector<Stmt> else_body;
  bool has_else = false;
  std::int64_t bound = 0;    // While
  SourceLoc loc;

  bool operator==(const Stmt&) const = default;
};

struct FieldDecl {
  std::string name;
  Type type;
  SourceLoc loc;
  bool operator==(const FieldDecl&) const = default;
};

struct RecordDecl {
  std::string name;
  std::vector<FieldDecl> fields;
  SourceLoc loc;
  bool operator==(const RecordDecl&) const = default;
};

struct Param {
  std::string name;
  Type type;
  bool operator==(const Param&) const = default;
};

struct FunctionDecl {
  std::string name;
  Type ret;
  std::vector<Param> params;
  std::vector<Stmt> body;
  SourceLoc loc;
  bool operator==(const FunctionDecl&) const = default;
};

struct GlobalDecl {
  std::string name;
  Type type;
  std::optional<Expr> init;  // literal only
  SourceLoc loc;
  bool operator==(const GlobalDecl&) const = default;
};

/// One feature module: introductions plus refinements of functions of
/// features earlier in the composition order. A struct declaration whose
/// name already exists below is superimposed (its fields are added).
struct FeatureModule {
  std::string name;
  int order_index = 0;
  std::vector<RecordDecl> records;
  std::vector<GlobalDecl> globals;
  std::vector<FunctionDecl> functions;    // introductions
  std::vector<FunctionDecl> refinements;  // bodies that call `original`

  bool operator==(const FeatureModule&) const = default;
};

/// Flat program: a composed product, a woven product, or a simulator.
struct Program {
  std::vector<RecordDecl> records;
  std::vector<GlobalDecl> globals;
  std::vector<FunctionDecl> functions;
  std::string entry = "main";
  /// Simulator only: globals whose values come from the product selection.
  std::vector<std::string> feature_variables;
  /// Element key ("function:f", "record:r", "field:r.f", "global:g") to feature.
  std::map<std::string, std::string> provenance;

  const FunctionDecl* find_function(const std::string& name) const;
  FunctionDecl* find_function(const std::string& name);
  const RecordDecl* find_record(const std::string& name) const;
  RecordDecl* find_record(const std::string& name);
  const GlobalDecl* find_global(const std::string& name) const;
};

bool contains_original(const std::vector<Stmt>& body);

/// Visits every expression in a statement list (pre-order, mutable).
template <typename F>
void for_each_expr(std::vector<Stmt>& body, F&& fn);
template <typename F>
void for_each_expr(Expr& e, F&& fn) {
  fn(e);
  for (auto& a : e.args) for_each_expr(a, fn);
}
template <typename F>
void for_each_expr(std::vector<Stmt>& body, F&& fn) {
  for (auto& s : body) {
    for (auto& e : s.exprs) for_each_expr(e, fn);
    for_each_expr(s.body, fn);
    for_each_expr(s.else_body, fn);
  }
}

template <typename F>
void for_each_expr(const Expr& e, F&& fn) {
  fn(e);
  for (const auto& a : e.args) for_each_expr(a, fn);
}
template <typename F>
void for_each_expr(const std::vector<Stmt>& body, F&& fn) {
  for (const auto& s : body) {
    for (const auto& e : s.exprs) for_each_expr(e, fn);
    for_each_expr(s.body, fn);
    for_each_expr(s.else_body, fn);
  }
}

}  // namespace fav
