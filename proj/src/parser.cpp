// Copyright The fav authors
// SPDX-License-Identifier: Apache-2.0

#include "fav/parser.hpp"

#include <array>
#include <cctype>
#include <set>

#include "parser_impl.hpp"

namespace fav::detail {

namespace {

constexpr std::array<std::string_view, 20> kKeywords = {
    "struct", "void", "int", "bool", "symbol", "original", "nondet", "new", "null", "true",
    "false", "if", "else", "while", "bound", "return", "fail", "feature", "automaton", "shadow"};

// Longest first.
constexpr std::array<std::string_view, 22> kPuncts = {
    "->", "==", "!=", "<=", ">=", "&&", "||", "{", "}", "(", ")",
    ";", ",", "=", "<", ">", "+", "-", "*", "/", "%", "!"};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

}  // namespace

bool is_keyword(std::string_view s) {
  for (auto k : kKeywords)
    if (k == s) return true;
  return false;
}

Lexed lex(std::string_view src, const LexOptions& opts) {
  Lexed out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      std::size_t e = src.find('\n', i);
      if (e == std::string_view::npos) e = src.size();
      out.hash_comments.emplace_back(src.substr(i + 1, e - i - 1));
      advance(e - i);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '*') {
      SourceLoc start{line, col};
      advance(2);
      while (i + 1 < src.size() && !(src[i] == '*' && src[i + 1] == '/')) advance(1);
      if (i + 1 >= src.size()) throw SyntaxError("unterminated comment", start);
      advance(2);
      continue;
    }
    Token t;
    t.loc = {line, col};
    if (ident_start(c) || (opts.internal_names && c == '$')) {
      std::size_t j = i;
      while (j < src.size()) {
        if (ident_char(src[j])) {
          ++j;
        } else if (opts.internal_names && src[j] == '$') {
          ++j;
        } else if (opts.internal_names && src[j] == ':' && j + 2 < src.size() && src[j + 1] == ':' &&
                   (ident_char(src[j + 2]) || src[j + 2] == '$')) {
          j += 2;
        } else {
          break;
        }
      }
      t.kind = Tok::Ident;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
      out.tokens.push_back(std::move(t));
      continue;
    }
    if (c == '$' || (c == ':' && i + 1 < src.size() && src[i + 1] == ':'))
      throw SyntaxError("reserved character in identifier", t.loc);
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      if (j < src.size() && ident_char(src[j])) throw SyntaxError("malformed number", t.loc);
      t.kind = Tok::Int;
      t.text = std::string(src.substr(i, j - i));
      try {
        t.value = std::stoll(t.text);
      } catch (const std::out_of_range&) {
        throw SyntaxError("integer literal out of range", t.loc);
      }
      advance(j - i);
      out.tokens.push_back(std::move(t));
      continue;
    }
    if (c == '"') {
      std::size_t j = i + 1;
      while (j < src.size() && src[j] != '"' && src[j] != '\n' && src[j] != '\\') ++j;
      if (j >= src.size() || src[j] != '"') throw SyntaxError("unterminated symbol literal", t.loc);
      t.kind = Tok::String;
      t.text = std::string(src.substr(i + 1, j - i - 1));
      advance(j + 1 - i);
      out.tokens.push_back(std::move(t));
      continue;
    }
    bool matched = false;
    for (auto p : kPuncts) {
      if (src.substr(i, p.size()) == p) {
        t.kind = Tok::Punct;
        t.text = std::string(p);
        advance(p.size());
        out.tokens.push_back(std::move(t));
        matched = true;
        break;
      }
    }
    if (!matched) {
      // ':' is only used by spec parameter patterns.
      if (c == ':') {
        t.kind = Tok::Punct;
        t.text = ":";
        advance(1);
        out.tokens.push_back(std::move(t));
        continue;
      }
      throw SyntaxError(std::string("unexpected character '") + c + "'", t.loc);
    }
  }
  Token end;
  end.kind = Tok::End;
  end.loc = {line, col};
  out.tokens.push_back(end);
  return out;
}

const Token& Parser::peek(std::size_t k) const {
  std::size_t p = pos_ + k;
  return p < toks_.size() ? toks_[p] : toks_.back();
}

bool Parser::is(std::string_view text, std::size_t k) const {
  const Token& t = peek(k);
  return (t.kind == Tok::Punct || t.kind == Tok::Ident) && t.text == text;
}

bool Parser::is_ident(std::size_t k) const {
  const Token& t = peek(k);
  return t.kind == Tok::Ident && !is_keyword(t.text);
}

Token Parser::next() {
  Token t = peek();
  if (pos_ < toks_.size() - 1) ++pos_;
  return t;
}

bool Parser::accept(std::string_view text) {
  if (is(text)) {
    next();
    return true;
  }
  return false;
}

Token Parser::expect(std::string_view text) {
  if (!is(text)) fail_here("expected '" + std::string(text) + "'");
  return next();
}

std::string Parser::expect_ident() {
  if (!is_ident()) fail_here("expected identifier");
  return next().text;
}

void Parser::fail_here(const std::string& msg) const {
  const Token& t = peek();
  std::string got = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
  throw SyntaxError(msg + ", got " + got, t.loc);
}

bool Parser::at_type() const {
  return is("int") || is("bool") || is("symbol") || is("void") || (is("struct") && !is("{", 2));
}

Type Parser::parse_type(bool allow_void) {
  if (accept("int")) return Type::int_();
  if (accept("bool")) return Type::bool_();
  if (accept("symbol")) return Type::symbol();
  if (is("void")) {
    if (!allow_void) fail_here("void is not a value type");
    next();
    return Type::void_();
  }
  if (accept("struct")) {
    std::string r = expect_ident();
    expect("*");
    return Type::ref(r);
  }
  fail_here("expected type");
}

std::vector<Param> Parser::parse_params() {
  std::vector<Param> ps;
  expect("(");
  if (!is(")")) {
    do {
      Param p;
      p.type = parse_type(false);
      p.name = expect_ident();
      ps.push_back(std::move(p));
    } while (accept(","));
  }
  expect(")");
  return ps;
}

std::vector<Stmt> Parser::parse_block() {
  expect("{");
  std::vector<Stmt> out;
  while (!is("}")) {
    if (at_end()) fail_here("unterminated block");
    out.push_back(parse_stmt());
  }
  expect("}");
  return out;
}

Stmt Parser::parse_stmt() {
  Stmt s;
  s.loc = peek().loc;
  if (is("{")) {
    s.kind = StmtKind::Block;
    s.body = parse_block();
    return s;
  }
  if (accept("if")) {
    s.kind = StmtKind::If;
    expect("(");
    s.exprs.push_back(parse_expr());
    expect(")");
    s.body.push_back(parse_stmt());
    if (accept("else")) {
      s.has_else = true;
      s.else_body.push_back(parse_stmt());
    }
    return s;
  }
  if (accept("while")) {
    s.kind = StmtKind::While;
    expect("(");
    s.exprs.push_back(parse_expr());
    expect(")");
    if (!accept("bound")) fail_here("loop without static bound (expected 'bound N')");
    if (peek().kind != Tok::Int) fail_here("expected integer loop bound");
    s.bound = next().value;
    s.body.push_back(parse_stmt());
    return s;
  }
  if (accept("return")) {
    s.kind = StmtKind::Return;
    if (!is(";")) s.exprs.push_back(parse_expr());
    expect(";");
    return s;
  }
  if (is("fail")) {
    if (!allow_fail_) fail_here("'fail' is only allowed in specifications");
    next();
    s.kind = StmtKind::Fail;
    if (peek().kind == Tok::String) s.name = next().text;
    expect(";");
    return s;
  }
  if (at_type()) {
    s.kind = StmtKind::VarDecl;
    s.type = parse_type(false);
    s.name = expect_ident();
    if (accept("=")) s.exprs.push_back(parse_expr());
    expect(";");
    return s;
  }
  Expr e = parse_expr();
  if (accept("=")) {
    if (e.kind != ExprKind::Var && e.kind != ExprKind::Field)
      throw SyntaxError("left side of assignment is not assignable", s.loc);
    s.kind = StmtKind::Assign;
    s.exprs.push_back(std::move(e));
    s.exprs.push_back(parse_expr());
  } else {
    s.kind = StmtKind::ExprStmt;
    s.exprs.push_back(std::move(e));
  }
  expect(";");
  return s;
}

namespace {

struct BinLevel {
  std::vector<std::pair<std::string_view, Op>> ops;
};

const std::array<BinLevel, 6>& levels() {
  static const std::array<BinLevel, 6> l = {{
      {{{"||", Op::Or}}},
      {{{"&&", Op::And}}},
      {{{"==", Op::Eq}, {"!=", Op::Ne}}},
      {{{"<=", Op::Le}, {">=", Op::Ge}, {"<", Op::Lt}, {">", Op::Gt}}},
      {{{"+", Op::Add}, {"-", Op::Sub}}},
      {{{"*", Op::Mul}, {"/", Op::Div}, {"%", Op::Mod}}},
  }};
  return l;
}

}  // namespace

Expr Parser::parse_expr() { return parse_binary(0); }

Expr Parser::parse_binary(int level) {
  if (level >= static_cast<int>(levels().size())) return parse_unary();
  Expr lhs = parse_binary(level + 1);
  for (;;) {
    bool found = false;
    for (auto [text, op] : levels()[level].ops) {
      if (peek().kind == Tok::Punct && peek().text == text) {
        SourceLoc loc = next().loc;
        Expr rhs = parse_binary(level + 1);
        lhs = Expr::binary(op, std::move(lhs), std::move(rhs));
        lhs.loc = loc;
        found = true;
        break;
      }
    }
    if (!found) return lhs;
  }
}

Expr Parser::parse_unary() {
  SourceLoc loc = peek().loc;
  if (accept("!")) {
    Expr e = Expr::unary(Op::Not, parse_unary());
    e.loc = loc;
    return e;
  }
  if (is("-")) {
    next();
    if (peek().kind == Tok::Int && !is("->", 1)) {
      Expr e = Expr::int_lit(-next().value);
      e.loc = loc;
      return e;
    }
    Expr e = Expr::unary(Op::Neg, parse_unary());
    e.loc = loc;
    return e;
  }
  return parse_postfix();
}

Expr Parser::parse_postfix() {
  Expr e = parse_primary();
  while (is("->")) {
    SourceLoc loc = next().loc;
    std::string f = expect_ident();
    e = Expr::field(std::move(e), f);
    e.loc = loc;
  }
  return e;
}

std::vector<Expr> Parser::parse_args() {
  std::vector<Expr> args;
  expect("(");
  if (!is(")")) {
    do {
      args.push_back(parse_expr());
    } while (accept(","));
  }
  expect(")");
  return args;
}

std::int64_t Parser::parse_signed_int() {
  bool neg = accept("-");
  if (peek().kind != Tok::Int) fail_here("expected integer constant");
  std::int64_t v = next().value;
  return neg ? -v : v;
}

Expr Parser::parse_primary() {
  const Token& t = peek();
  SourceLoc loc = t.loc;
  Expr e;
  if (t.kind == Tok::Int) {
    e = Expr::int_lit(next().value);
  } else if (t.kind == Tok::String) {
    e = Expr::sym_lit(next().text);
  } else if (accept("true")) {
    e = Expr::bool_lit(true);
  } else if (accept("false")) {
    e = Expr::bool_lit(false);
  } else if (accept("null")) {
    e = Expr::null_lit();
  } else if (accept("original")) {
    e = Expr::original(parse_args());
  } else if (accept("nondet")) {
    expect("(");
    std::int64_t lo = parse_signed_int();
    expect(",");
    std::int64_t hi = parse_signed_int();
    expect(")");
    if (lo > hi) throw SyntaxError("nondet bounds out of order", loc);
    e = Expr::nondet(lo, hi);
  } else if (accept("new")) {
    e = Expr::new_record(expect_ident());
  } else if (accept("(")) {
    e = parse_expr();
    expect(")");
    return e;
  } else if (is_ident()) {
    std::string name = next().text;
    if (is("(")) {
      e = Expr::call(name, parse_args());
    } else {
      e = Expr::var(name);
    }
  } else {
    fail_here("expected expression");
  }
  e.loc = loc;
  return e;
}

RecordDecl Parser::parse_record_body(std::string name, SourceLoc loc) {
  RecordDecl r;
  r.name = std::move(name);
  r.loc = loc;
  expect("{");
  std::set<std::string> seen;
  while (!is("}")) {
    FieldDecl f;
    f.loc = peek().loc;
    f.type = parse_type(false);
    f.name = expect_ident();
    expect(";");
    if (!seen.insert(f.name).second)
      throw SyntaxError("duplicate field '" + f.name + "' in struct " + r.name, f.loc);
    r.fields.push_back(std::move(f));
  }
  expect("}");
  accept(";");
  return r;
}

Parser::TopLevel Parser::parse_top_level() {
  TopLevel out{};
  SourceLoc loc = peek().loc;
  if (is("struct") && is("{", 2)) {
    next();
    std::string name = expect_ident();
    out.kind = TopLevel::Record;
    out.record = parse_record_body(name, loc);
    return out;
  }
  Type t = parse_type(true);
  std::string name = expect_ident();
  if (is("(")) {
    out.kind = TopLevel::Function;
    out.function.name = name;
    out.function.ret = t;
    out.function.loc = loc;
    out.function.params = parse_params();
    out.function.body = parse_block();
    return out;
  }
  if (t.kind == TypeKind::Void) throw SyntaxError("global of type void", loc);
  out.kind = TopLevel::Global;
  out.global.name = name;
  out.global.type = t;
  out.global.loc = loc;
  if (accept("=")) {
    Expr init = parse_expr();
    if (init.kind != ExprKind::IntLit && init.kind != ExprKind::BoolLit && init.kind != ExprKind::SymLit &&
        init.kind != ExprKind::NullLit)
      throw SyntaxError("global initializer must be a literal", init.loc);
    out.global.init = std::move(init);
  }
  expect(";");
  return out;
}

}  // namespace fav::detail

namespace fav {

using detail::Parser;

FeatureModule parse_feature_module(std::string_view source, std::string_view name) {
  auto lexed = detail::lex(source, {});
  Parser p(std::move(lexed.tokens), false);
  FeatureModule m;
  m.name = std::string(name);
  if (p.accept("feature")) {
    SourceLoc loc = p.peek().loc;
    std::string header = p.expect_ident();
    p.expect(";");
    if (!m.name.empty() && m.name != header)
      throw SyntaxError("feature header '" + header + "' does not match module name '" + m.name + "'", loc);
    m.name = header;
  }
  std::set<std::string> funcs, records, globals;
  while (!p.at_end()) {
    auto top = p.parse_top_level();
    switch (top.kind) {
      case Parser::TopLevel::Record:
        if (!records.insert(top.record.name).second)
          throw SyntaxError("duplicate struct '" + top.record.name + "'", top.record.loc);
        m.records.push_back(std::move(top.record));
        break;
      case Parser::TopLevel::Global:
        if (!globals.insert(top.global.name).second || funcs.count(top.global.name))
          throw SyntaxError("duplicate name '" + top.global.name + "'", top.global.loc);
        m.globals.push_back(std::move(top.global));
        break;
      case Parser::TopLevel::Function:
        if (!funcs.insert(top.function.name).second || globals.count(top.function.name))
          throw SyntaxError("duplicate function '" + top.function.name + "'", top.function.loc);
        if (contains_original(top.function.body))
          m.refinements.push_back(std::move(top.function));
        else
          m.functions.push_back(std::move(top.function));
        break;
    }
  }
  return m;
}

Program parse_program(std::string_view source) {
  auto lexed = detail::lex(source, {.internal_names = true});
  Program prog;
  for (const auto& c : lexed.hash_comments) {
    std::string_view line = c;
    constexpr std::string_view kHeader = " varenc features:";
    if (line.substr(0, kHeader.size()) == kHeader) {
      std::string rest(line.substr(kHeader.size()));
      std::size_t i = 0;
      while (i < rest.size()) {
        while (i < rest.size() && rest[i] == ' ') ++i;
        std::size_t j = i;
        while (j < rest.size() && rest[j] != ' ') ++j;
        if (j > i) prog.feature_variables.push_back(rest.substr(i, j - i));
        i = j;
      }
    }
  }
  Parser p(std::move(lexed.tokens), true);
  while (!p.at_end()) {
    auto top = p.parse_top_level();
    switch (top.kind) {
      case Parser::TopLevel::Record: prog.records.push_back(std::move(top.record)); break;
      case Parser::TopLevel::Global: prog.globals.push_back(std::move(top.global)); break;
      case Parser::TopLevel::Function: prog.functions.push_back(std::move(top.function)); break;
    }
  }
  return prog;
}

}  // namespace fav
