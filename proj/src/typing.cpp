// Copyright The fav authors
// SPDX-License-Identifier: Apache-2.0

#include "typing.hpp"

#include "fav/printer.hpp"

namespace fav::detail {

bool assignable(const Type& to, const Type& from) {
  if (to == from) return true;
  return to.kind == TypeKind::Ref && from.kind == TypeKind::Null;
}

namespace {

bool comparable(const Type& a, const Type& b) {
  if (a.kind == TypeKind::Void || b.kind == TypeKind::Void) return false;
  return assignable(a, b) || assignable(b, a) || (a.kind == TypeKind::Null && b.kind == TypeKind::Null);
}

}  // namespace

void BodyTyper::error(const std::string& msg, SourceLoc loc) {
  errors.push_back({where_ + ": " + msg, loc});
}

bool BodyTyper::type_exists(const Type& t) const {
  return t.kind != TypeKind::Ref || prog_.find_record(t.record) != nullptr;
}

const Type* BodyTyper::lookup(const std::string& name) const {
  for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it)
    for (auto jt = it->rbegin(); jt != it->rend(); ++jt)
      if (jt->first == name) return &jt->second;
  if (const auto* g = prog_.find_global(name)) return &g->type;
  return nullptr;
}

void BodyTyper::check_function(FunctionDecl& f) {
  check_body(f.body, f.params, f.ret, "function '" + f.name + "'");
}

void BodyTyper::check_body(std::vector<Stmt>& body, const std::vector<Param>& params, const Type& ret,
                           const std::string& where) {
  where_ = where;
  ret_ = ret;
  scopes_.clear();
  scopes_.emplace_back();
  if (!type_exists(ret)) error("unknown record in return type '" + to_string(ret) + "'", {});
  for (const auto& p : params) {
    for (const auto& q : scopes_.back())
      if (q.first == p.name) error("duplicate parameter '" + p.name + "'", {});
    if (p.type.kind == TypeKind::Void || p.type.kind == TypeKind::Null || !type_exists(p.type))
      error("bad parameter type for '" + p.name + "'", {});
    scopes_.back().emplace_back(p.name, p.type);
  }
  block(body);
  scopes_.clear();
}

void BodyTyper::block(std::vector<Stmt>& body) {
  scopes_.emplace_back();
  for (auto& s : body) stmt(s);
  scopes_.pop_back();
}

void BodyTyper::stmt(Stmt& s) {
  auto require_bool = [&](Expr& c) {
    Type t = expr(c);
    if (t.kind != TypeKind::Bool) error("condition must be bool, got " + to_string(t), c.loc);
  };
  switch (s.kind) {
    case StmtKind::VarDecl: {
      if (s.type.kind == TypeKind::Void || s.type.kind == TypeKind::Null || !type_exists(s.type))
        error("bad type for local '" + s.name + "'", s.loc);
      for (const auto& q : scopes_.back())
        if (q.first == s.name) error("duplicate local '" + s.name + "'", s.loc);
      if (!s.exprs.empty()) {
        Type t = expr(s.exprs[0]);
        if (!assignable(s.type, t))
          error("cannot initialize " + to_string(s.type) + " '" + s.name + "' with " + to_string(t), s.loc);
      }
      scopes_.back().emplace_back(s.name, s.type);
      return;
    }
    case StmtKind::Assign: {
      Expr& lhs = s.exprs[0];
      if (lhs.kind != ExprKind::Var && lhs.kind != ExprKind::Field) {
        error("assignment target must be a variable or a field", s.loc);
        expr(s.exprs[1]);
        return;
      }
      Type lt = expr(lhs);
      Type rt = expr(s.exprs[1]);
      if (!assignable(lt, rt))
        error("cannot assign " + to_string(rt) + " to " + print_expr(lhs) + " of type " + to_string(lt), s.loc);
      return;
    }
    case StmtKind::ExprStmt: expr(s.exprs[0]); return;
    case StmtKind::If:
      require_bool(s.exprs[0]);
      block(s.body);
      block(s.else_body);
      return;
    case StmtKind::While:
      require_bool(s.exprs[0]);
      if (s.bound < 0) error("negative loop bound", s.loc);
      block(s.body);
      return;
    case StmtKind::Return:
      if (s.exprs.empty()) {
        if (ret_.kind != TypeKind::Void) error("missing return value", s.loc);
      } else {
        Type t = expr(s.exprs[0]);
        if (ret_.kind == TypeKind::Void)
          error("void function returns a value", s.loc);
        else if (!assignable(ret_, t))
          error("returns " + to_string(t) + ", expected " + to_string(ret_), s.loc);
      }
      return;
    case StmtKind::Block: block(s.body); return;
    case StmtKind::Fail: return;
  }
}

Type BodyTyper::expr(Expr& e) {
  const Type bad = Type::void_();
  switch (e.kind) {
    case ExprKind::IntLit: return Type::int_();
    case ExprKind::BoolLit: return Type::bool_();
    case ExprKind::SymLit: return Type::symbol();
    case ExprKind::NullLit: return Type::null();
    case ExprKind::Nondet:
      if (e.int_value > e.hi) error("nondet bounds out of order", e.loc);
      return Type::int_();
    case ExprKind::Var: {
      if (const Type* t = lookup(e.name)) return *t;
      error("unknown variable '" + e.name + "'", e.loc);
      return bad;
    }
    case ExprKind::Field: {
      Type ot = expr(e.args[0]);
      if (ot.kind != TypeKind::Ref) {
        if (ot.kind != TypeKind::Void) error("field access '" + e.name + "' on " + to_string(ot), e.loc);
        return bad;
      }
      const RecordDecl* r = prog_.find_record(ot.record);
      if (!r) {
        error("unknown record '" + ot.record + "'", e.loc);
        return bad;
      }
      for (const auto& f : r->fields) {
        if (f.name == e.name) {
          if (on_field) on_field(e, r->name);
          return f.type;
        }
      }
      error("record '" + r->name + "' has no field '" + e.name + "'", e.loc);
      return bad;
    }
    case ExprKind::Call: {
      const FunctionDecl* f = prog_.find_function(e.name);
      std::vector<Type> ats;
      for (auto& a : e.args) ats.push_back(expr(a));
      if (!f) {
        error("unknown function '" + e.name + "'", e.loc);
        return bad;
      }
      if (f->params.size() != e.args.size()) {
        error("'" + e.name + "' expects " + std::to_string(f->params.size()) + " arguments, got " +
                  std::to_string(e.args.size()),
              e.loc);
        return f->ret;
      }
      for (std::size_t i = 0; i < ats.size(); ++i)
        if (!assignable(f->params[i].type, ats[i]))
          error("argument " + std::to_string(i + 1) + " of '" + e.name + "': expected " +
                    to_string(f->params[i].type) + ", got " + to_string(ats[i]),
                e.loc);
      return f->ret;
    }
    case ExprKind::Original:
      for (auto& a : e.args) expr(a);
      error("'original' outside a refinement", e.loc);
      return bad;
    case ExprKind::New:
      if (!prog_.find_record(e.name)) {
        error("unknown record '" + e.name + "'", e.loc);
        return bad;
      }
      return Type::ref(e.name);
    case ExprKind::Unary: {
      Type t = expr(e.args[0]);
      if (e.op == Op::Neg) {
        if (t.kind != TypeKind::Int) error("'-' needs int, got " + to_string(t), e.loc);
        return Type::int_();
      }
      if (t.kind != TypeKind::Bool) error("'!' needs bool, got " + to_string(t), e.loc);
      return Type::bool_();
    }
    case ExprKind::Binary: {
      Type l = expr(e.args[0]);
      Type r = expr(e.args[1]);
      std::string op(op_text(e.op));
      switch (e.op) {
        case Op::Add:
        case Op::Sub:
        case Op::Mul:
        case Op::Div:
        case Op::Mod:
          if (l.kind != TypeKind::Int || r.kind != TypeKind::Int)
            error("'" + op + "' needs int operands", e.loc);
          return Type::int_();
        case Op::Lt:
        case Op::Le:
        case Op::Gt:
        case Op::Ge:
          if (l.kind != TypeKind::Int || r.kind != TypeKind::Int)
            error("'" + op + "' needs int operands", e.loc);
          return Type::bool_();
        case Op::Eq:
        case Op::Ne:
          if (!comparable(l, r))
            error("cannot compare " + to_string(l) + " with " + to_string(r), e.loc);
          return Type::bool_();
        case Op::And:
        case Op::Or:
          if (l.kind != TypeKind::Bool || r.kind != TypeKind::Bool)
            error("'" + op + "' needs bool operands", e.loc);
          return Type::bool_();
        default: return bad;
      }
    }
  }
  return bad;
}

}  // namespace fav::detail
