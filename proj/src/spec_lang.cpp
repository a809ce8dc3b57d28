// Copyright The fav authors
// SPDX-License-Identifier: Apache-2.0

#include "fav/spec_lang.hpp"

#include <optional>
#include <set>

#include "fav/printer.hpp"
#include "parser_impl.hpp"

namespace fav {

using detail::Parser;

namespace {

ParamPattern parse_pattern(Parser& p) {
  ParamPattern pp;
  if (p.at_type()) {
    pp.type = p.parse_type(false);
    pp.name = p.expect_ident();
    return pp;
  }
  pp.name = p.expect_ident();
  p.expect(":");
  pp.type = p.parse_type(false);
  return pp;
}

Intercept parse_intercept(Parser& p) {
  Intercept ic;
  ic.loc = p.peek().loc;
  bool before = p.is("before");
  p.next();
  ic.position = before ? InterceptPosition::Before : InterceptPosition::After;
  if (p.is_ident() && p.is("=", 1)) {
    if (before) throw SyntaxError("return binding on a before intercept", p.peek().loc);
    ic.return_binding = p.next().text;
    p.expect("=");
  }
  ic.ret = p.parse_type(true);
  std::string first = p.expect_ident();
  if (p.accept("=")) {
    // `after int r = f(...)`
    if (before) throw SyntaxError("return binding on a before intercept", ic.loc);
    if (!ic.return_binding.empty()) p.fail_here("duplicate return binding");
    ic.return_binding = first;
    ic.function = p.expect_ident();
  } else {
    ic.function = first;
  }
  if (!ic.return_binding.empty() && ic.ret.kind == TypeKind::Void)
    throw SyntaxError("return binding on a void event", ic.loc);
  p.expect("(");
  if (!p.is(")")) {
    do {
      ic.params.push_back(parse_pattern(p));
    } while (p.accept(","));
  }
  p.expect(")");
  ic.body = p.parse_block();
  return ic;
}

Automaton parse_one(Parser& p) {
  Automaton a;
  a.loc = p.peek().loc;
  p.expect("automaton");
  a.name = p.expect_ident();
  p.expect("{");
  std::set<std::string> names;
  auto claim = [&](const std::string& n, SourceLoc loc) {
    if (!names.insert(n).second) throw SyntaxError("duplicate introduction '" + n + "'", loc);
  };
  if (p.is("introduction")) {
    p.next();
    a.has_introduction = true;
    p.expect("{");
    while (!p.is("}")) {
      if (p.at_end()) p.fail_here("unterminated introduction");
      if (p.accept("shadow")) {
        ShadowDecl sd;
        sd.loc = p.peek().loc;
        p.expect("struct");
        sd.target_record = p.expect_ident();
        RecordDecl body = p.parse_record_body(sd.target_record, sd.loc);
        sd.added_fields = std::move(body.fields);
        a.shadows.push_back(std::move(sd));
        continue;
      }
      auto top = p.parse_top_level();
      switch (top.kind) {
        case Parser::TopLevel::Record:
          claim(top.record.name, top.record.loc);
          a.records.push_back(std::move(top.record));
          break;
        case Parser::TopLevel::Global:
          claim(top.global.name, top.global.loc);
          a.globals.push_back(std::move(top.global));
          break;
        case Parser::TopLevel::Function:
          claim(top.function.name, top.function.loc);
          if (contains_original(top.function.body))
            throw SyntaxError("'original' outside a refinement", top.function.loc);
          a.functions.push_back(std::move(top.function));
          break;
      }
    }
    p.expect("}");
  }
  if (p.is("introduction")) p.fail_here("at most one introduction block is allowed");
  while (p.is("before") || p.is("after")) a.intercepts.push_back(parse_intercept(p));
  if (a.intercepts.empty()) p.fail_here("automaton '" + a.name + "' needs at least one intercept");
  p.expect("}");
  for (const auto& ic : a.intercepts)
    if (contains_original(ic.body)) throw SyntaxError("'original' inside an intercept", ic.loc);
  return a;
}

}  // namespace

std::vector<Automaton> parse_spec_file(std::string_view source) {
  auto lexed = detail::lex(source, {});
  Parser p(std::move(lexed.tokens), true);
  std::vector<Automaton> out;
  std::set<std::string> names;
  while (!p.at_end()) {
    SourceLoc loc = p.peek().loc;
    out.push_back(parse_one(p));
    if (!names.insert(out.back().name).second)
      throw SyntaxError("duplicate automaton '" + out.back().name + "'", loc);
  }
  if (out.empty()) throw SyntaxError("spec file declares no automaton", {1, 1});
  return out;
}

Automaton parse_automaton(std::string_view source) {
  auto lexed = detail::lex(source, {});
  Parser p(std::move(lexed.tokens), true);
  Automaton a = parse_one(p);
  if (!p.at_end()) p.fail_here("trailing input after automaton");
  return a;
}

std::string site_label(const Automaton& a, std::size_t intercept_index) {
  const Intercept& ic = a.intercepts.at(intercept_index);
  return a.name + "@" + (ic.position == InterceptPosition::Before ? "before " : "after ") + ic.function;
}

namespace {

class EffectChecker {
 public:
  EffectChecker(const Automaton& a, const std::vector<RecordDecl>& prog, const std::vector<GlobalDecl>& globals)
      : a_(a), prog_(prog), globals_(globals) {}

  void check_body(const std::string& where, const std::vector<Stmt>& body,
                  std::vector<std::pair<std::string, Type>> scope) {
    where_ = where;
    scopes_.clear();
    scopes_.push_back(std::move(scope));
    stmts(body);
  }

  std::vector<SideEffectViolation> violations;

 private:
  void report(const std::string& target, SourceLoc loc) {
    violations.push_back({a_.name, where_, target, loc});
  }

  std::optional<Type> lookup_var(const std::string& n) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it)
      for (auto jt = it->rbegin(); jt != it->rend(); ++jt)
        if (jt->first == n) return jt->second;
    for (const auto& g : a_.globals)
      if (g.name == n) return g.type;
    for (const auto& g : globals_)
      if (g.name == n) return g.type;
    return std::nullopt;
  }

  bool is_local(const std::string& n) const {
    for (const auto& s : scopes_)
      for (const auto& v : s)
        if (v.first == n) return true;
    return false;
  }

  bool own_record(const std::string& r) const {
    for (const auto& rec : a_.records)
      if (rec.name == r) return true;
    return false;
  }

  bool is_shadow(const std::string& rec, const std::string& field) const {
    for (const auto& sd : a_.shadows)
      if (sd.target_record == rec)
        for (const auto& f : sd.added_fields)
          if (f.name == field) return true;
    return false;
  }

  std::optional<Type> field_type(const std::string& rec, const std::string& field) const {
    for (const auto& sd : a_.shadows)
      if (sd.target_record == rec)
        for (const auto& f : sd.added_fields)
          if (f.name == field) return f.type;
    for (const auto* set : {&a_.records, &prog_})
      for (const auto& r : *set)
        if (r.name == rec)
          for (const auto& f : r.fields)
            if (f.name == field) return f.type;
    return std::nullopt;
  }

  std::optional<Type> type_of(const Expr& e) const {
    switch (e.kind) {
      case ExprKind::Var: return lookup_var(e.name);
      case ExprKind::Field: {
        auto t = type_of(e.args[0]);
        if (!t || t->kind != TypeKind::Ref) return std::nullopt;
        return field_type(t->record, e.name);
      }
      case ExprKind::Call:
        for (const auto& f : a_.functions)
          if (f.name == e.name) return f.ret;
        return std::nullopt;
      case ExprKind::New: return Type::ref(e.name);
      default: return std::nullopt;
    }
  }

  void expr(const Expr& e) {
    for_each_expr(e, [&](const Expr& x) {
      // Calls to program functions are checked for purity when weaving.
      if (x.kind == ExprKind::New && !own_record(x.name)) {
        report("new " + x.name, x.loc);
      } else if (x.kind == ExprKind::Original) {
        report("original", x.loc);
      }
    });
  }

  void stmts(const std::vector<Stmt>& body) {
    scopes_.emplace_back();
    for (const auto& s : body) stmt(s);
    scopes_.pop_back();
  }

  void stmt(const Stmt& s) {
    for (const auto& e : s.exprs) expr(e);
    switch (s.kind) {
      case StmtKind::VarDecl: scopes_.back().emplace_back(s.name, s.type); break;
      case StmtKind::Assign: {
        const Expr& lhs = s.exprs[0];
        if (lhs.kind == ExprKind::Var) {
          bool ok = is_local(lhs.name);
          if (!ok)
            for (const auto& g : a_.globals)
              if (g.name == lhs.name) ok = true;
          if (!ok) report(print_expr(lhs), s.loc);
        } else {
          auto t = type_of(lhs.args[0]);
          bool ok = t && t->kind == TypeKind::Ref && (own_record(t->record) || is_shadow(t->record, lhs.name));
          if (!ok) report(print_expr(lhs), s.loc);
        }
        break;
      }
      default: break;
    }
    if (!s.body.empty()) stmts(s.body);
    if (!s.else_body.empty()) stmts(s.else_body);
  }

  const Automaton& a_;
  const std::vector<RecordDecl>& prog_;
  const std::vector<GlobalDecl>& globals_;
  std::string where_;
  std::vector<std::vector<std::pair<std::string, Type>>> scopes_;
};

}  // namespace

SideEffectReport check_side_effect_freedom(const Automaton& a, const std::vector<RecordDecl>& program_records,
                                           const std::vector<GlobalDecl>& program_globals) {
  EffectChecker ck(a, program_records, program_globals);
  for (std::size_t i = 0; i < a.intercepts.size(); ++i) {
    const auto& ic = a.intercepts[i];
    std::vector<std::pair<std::string, Type>> scope;
    for (const auto& p : ic.params) scope.emplace_back(p.name, p.type);
    if (!ic.return_binding.empty()) scope.emplace_back(ic.return_binding, ic.ret);
    ck.check_body(site_label(a, i), ic.body, std::move(scope));
  }
  for (const auto& f : a.functions) {
    std::vector<std::pair<std::string, Type>> scope;
    for (const auto& p : f.params) scope.emplace_back(p.name, p.type);
    ck.check_body(a.name + "::" + f.name, f.body, std::move(scope));
  }
  return {std::move(ck.violations)};
}

}  // namespace fav
