// Copyright The fav authors
// SPDX-License-Identifier: Apache-2.0

#include "fav/ast.hpp"

namespace fav {

std::string to_string(const SourceLoc& loc) {
  return std::to_string(loc.line) + ":" + std::to_string(loc.column);
}

SyntaxError::SyntaxError(const std::string& msg, SourceLoc loc)
    : std::runtime_error(to_string(loc) + ": " + msg), loc_(loc) {}

std::string to_string(const Type& t) {
  switch (t.kind) {
    case TypeKind::Void: return "void";
    case TypeKind::Int: return "int";
    case TypeKind::Bool: return "bool";
    case TypeKind::Symbol: return "symbol";
    case TypeKind::Ref: return "struct " + t.record + "*";
    case TypeKind::Null: return "null";
  }
  return "?";
}

std::string_view op_text(Op op) {
  switch (op) {
    case Op::None: return "";
    case Op::Neg: return "-";
    case Op::Not: return "!";
    case Op::Add: return "+";
    case Op::Sub: return "-";
    case Op::Mul: return "*";
    case Op::Div: return "/";
    case Op::Mod: return "%";
    case Op::Eq: return "==";
    case Op::Ne: return "!=";
    case Op::Lt: return "<";
    case Op::Le: return "<=";
    case Op::Gt: return ">";
    case Op::Ge: return ">=";
    case Op::And: return "&&";
    case Op::Or: return "||";
  }
  return "";
}

Expr Expr::int_lit(std::int64_t v) {
  Expr e;
  e.kind = ExprKind::IntLit;
  e.int_value = v;
  return e;
}

Expr Expr::bool_lit(bool v) {
  Expr e;
  e.kind = ExprKind::BoolLit;
  e.int_value = v ? 1 : 0;
  return e;
}

Expr Expr::sym_lit(std::string text) {
  Expr e;
  e.kind = ExprKind::SymLit;
  e.name = std::move(text);
  return e;
}

Expr Expr::null_lit() {
  Expr e;
  e.kind = ExprKind::NullLit;
  return e;
}

Expr Expr::var(std::string name) {
  Expr e;
  e.kind = ExprKind::Var;
  e.name = std::move(name);
  return e;
}

Expr Expr::field(Expr object, std::string field) {
  Expr e;
  e.kind = ExprKind::Field;
  e.name = std::move(field);
  e.args.push_back(std::move(object));
  return e;
}

Expr Expr::call(std::string callee, std::vector<Expr> args) {
  Expr e;
  e.kind = ExprKind::Call;
  e.name = std::move(callee);
  e.args = std::move(args);
  return e;
}

Expr Expr::original(std::vector<Expr> args) {
  Expr e;
  e.kind = ExprKind::Original;
  e.args = std::move(args);
  return e;
}

Expr Expr::nondet(std::int64_t lo, std::int64_t hi) {
  Expr e;
  e.kind = ExprKind::Nondet;
  e.int_value = lo;
  e.hi = hi;
  return e;
}

Expr Expr::new_record(std::string record) {
  Expr e;
  e.kind = ExprKind::New;
  e.name = std::move(record);
  return e;
}

Expr Expr::unary(Op op, Expr operand) {
  Expr e;
  e.kind = ExprKind::Unary;
  e.op = op;
  e.args.push_back(std::move(operand));
  return e;
}

Expr Expr::binary(Op op, Expr lhs, Expr rhs) {
  Expr e;
  e.kind = ExprKind::Binary;
  e.op = op;
  e.args.push_back(std::move(lhs));
  e.args.push_back(std::move(rhs));
  return e;
}

const FunctionDecl* Program::find_function(const std::string& name) const {
  for (const auto& f : functions)
    if (f.name == name) return &f;
  return nullptr;
}

FunctionDecl* Program::find_function(const std::string& name) {
  for (auto& f : functions)
    if (f.name == name) return &f;
  return nullptr;
}

const RecordDecl* Program::find_record(const std::string& name) const {
  for (const auto& r : records)
    if (r.name == name) return &r;
  return nullptr;
}

RecordDecl* Program::find_record(const std::string& name) {
  for (auto& r : records)
    if (r.name == name) return &r;
  return nullptr;
}

const GlobalDecl* Program::find_global(const std::string& name) const {
  for (const auto& g : globals)
    if (g.name == name) return &g;
  return nullptr;
}

bool contains_original(const std::vector<Stmt>& body) {
  bool found = false;
  for_each_expr(body, [&](const Expr& e) {
    if (e.kind == ExprKind::Original) found = true;
  });
  return found;
}

}  // namespace fav
