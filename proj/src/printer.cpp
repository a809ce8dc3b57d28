// Copyright The fav authors
// SPDX-License-Identifier: Apache-2.0

#include "fav/printer.hpp"

#include <sstream>

namespace fav {

namespace {

int precedence(Op op) {
  switch (op) {
    case Op::Or: return 0;
    case Op::And: return 1;
    case Op::Eq:
    case Op::Ne: return 2;
    case Op::Lt:
    case Op::Le:
    case Op::Gt:
    case Op::Ge: return 3;
    case Op::Add:
    case Op::Sub: return 4;
    case Op::Mul:
    case Op::Div:
    case Op::Mod: return 5;
    default: return 6;
  }
}

void print_expr_into(std::ostringstream& os, const Expr& e);

void print_args(std::ostringstream& os, const std::vector<Expr>& args) {
  os << '(';
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) os << ", ";
    print_expr_into(os, args[i]);
  }
  os << ')';
}

void print_operand(std::ostringstream& os, const Expr& e, bool wrap) {
  if (wrap) os << '(';
  print_expr_into(os, e);
  if (wrap) os << ')';
}

void print_expr_into(std::ostringstream& os, const Expr& e) {
  switch (e.kind) {
    case ExprKind::IntLit: os << e.int_value; break;
    case ExprKind::BoolLit: os << (e.int_value ? "true" : "false"); break;
    case ExprKind::SymLit: os << '"' << e.name << '"'; break;
    case ExprKind::NullLit: os << "null"; break;
    case ExprKind::Var: os << e.name; break;
    case ExprKind::Field: {
      const Expr& obj = e.args[0];
      bool wrap = obj.kind == ExprKind::Unary || obj.kind == ExprKind::Binary ||
                  (obj.kind == ExprKind::IntLit && obj.int_value < 0);
      print_operand(os, obj, wrap);
      os << "->" << e.name;
      break;
    }
    case ExprKind::Call:
      os << e.name;
      print_args(os, e.args);
      break;
    case ExprKind::Original:
      os << "original";
      print_args(os, e.args);
      break;
    case ExprKind::Nondet: os << "nondet(" << e.int_value << ", " << e.hi << ')'; break;
    case ExprKind::New: os << "new " << e.name; break;
    case ExprKind::Unary: {
      const Expr& a = e.args[0];
      os << op_text(e.op);
      // `-5` would re-parse as a literal; `- -x` would lex as two minus signs anyway.
      bool wrap = a.kind == ExprKind::Binary || (a.kind == ExprKind::IntLit && e.op == Op::Neg) ||
                  (a.kind == ExprKind::IntLit && a.int_value < 0);
      print_operand(os, a, wrap);
      break;
    }
    case ExprKind::Binary: {
      int p = precedence(e.op);
      const Expr& l = e.args[0];
      const Expr& r = e.args[1];
      bool wl = l.kind == ExprKind::Binary && precedence(l.op) < p;
      bool wr = r.kind == ExprKind::Binary && precedence(r.op) <= p;
      print_operand(os, l, wl);
      os << ' ' << op_text(e.op) << ' ';
      print_operand(os, r, wr);
      break;
    }
  }
}

std::string indent(int depth) { return std::string(static_cast<std::size_t>(depth) * 2, ' '); }

void print_stmt(std::ostringstream& os, const Stmt& s, int depth);

void print_block(std::ostringstream& os, const std::vector<Stmt>& body, int depth) {
  os << "{\n";
  for (const auto& s : body) print_stmt(os, s, depth + 1);
  os << indent(depth) << '}';
}

// Branch and loop bodies are single statements; blocks print inline.
void print_sub(std::ostringstream& os, const Stmt& s, int depth) {
  if (s.kind == StmtKind::Block) {
    os << ' ';
    print_block(os, s.body, depth);
  } else {
    os << '\n';
    print_stmt(os, s, depth + 1);
    os << indent(depth);
  }
}

void print_stmt(std::ostringstream& os, const Stmt& s, int depth) {
  os << indent(depth);
  switch (s.kind) {
    case StmtKind::Block:
      print_block(os, s.body, depth);
      os << '\n';
      return;
    case StmtKind::If:
      os << "if (" << print_expr(s.exprs[0]) << ")";
      print_sub(os, s.body[0], depth);
      if (s.has_else) {
        if (s.body[0].kind != StmtKind::Block) {
          os << "else";
        } else {
          os << " else";
        }
        print_sub(os, s.else_body[0], depth);
      }
      os << '\n';
      return;
    case StmtKind::While:
      os << "while (" << print_expr(s.exprs[0]) << ") bound " << s.bound;
      print_sub(os, s.body[0], depth);
      os << '\n';
      return;
    default: os << print_stmt_head(s) << '\n'; return;
  }
}

void print_function(std::ostringstream& os, const FunctionDecl& f) {
  os << print_type(f.ret) << ' ' << f.name << '(';
  for (std::size_t i = 0; i < f.params.size(); ++i) {
    if (i) os << ", ";
    os << print_type(f.params[i].type) << ' ' << f.params[i].name;
  }
  os << ") ";
  print_block(os, f.body, 0);
  os << "\n";
}

void print_record(std::ostringstream& os, const RecordDecl& r, int depth) {
  os << indent(depth) << "struct " << r.name << " {\n";
  for (const auto& f : r.fields) os << indent(depth + 1) << print_type(f.type) << ' ' << f.name << ";\n";
  os << indent(depth) << "}\n";
}

void print_global(std::ostringstream& os, const GlobalDecl& g, int depth) {
  os << indent(depth) << print_type(g.type) << ' ' << g.name;
  if (g.init) os << " = " << print_expr(*g.init);
  os << ";\n";
}

}  // namespace

std::string print_expr(const Expr& e) {
  std::ostringstream os;
  print_expr_into(os, e);
  return os.str();
}

std::string print_type(const Type& t) {
  if (t.kind == TypeKind::Ref) return "struct " + t.record + " *";
  return to_string(t);
}

std::string print_stmt_head(const Stmt& s) {
  switch (s.kind) {
    case StmtKind::VarDecl: {
      std::string out = print_type(s.type) + ' ' + s.name;
      if (!s.exprs.empty()) out += " = " + print_expr(s.exprs[0]);
      return out + ';';
    }
    case StmtKind::Assign: return print_expr(s.exprs[0]) + " = " + print_expr(s.exprs[1]) + ';';
    case StmtKind::ExprStmt: return print_expr(s.exprs[0]) + ';';
    case StmtKind::If: return "if (" + print_expr(s.exprs[0]) + ")";
    case StmtKind::While: return "while (" + print_expr(s.exprs[0]) + ") bound " + std::to_string(s.bound);
    case StmtKind::Return: return s.exprs.empty() ? "return;" : "return " + print_expr(s.exprs[0]) + ';';
    case StmtKind::Block: return "{ ... }";
    case StmtKind::Fail: return s.name.empty() ? "fail;" : "fail \"" + s.name + "\";";
  }
  return {};
}

std::string pretty_print(const FeatureModule& m) {
  std::ostringstream os;
  if (!m.name.empty()) os << "feature " << m.name << ";\n\n";
  for (const auto& r : m.records) {
    print_record(os, r, 0);
    os << '\n';
  }
  for (const auto& g : m.globals) print_global(os, g, 0);
  if (!m.globals.empty()) os << '\n';
  for (const auto& f : m.functions) {
    print_function(os, f);
    os << '\n';
  }
  for (const auto& f : m.refinements) {
    print_function(os, f);
    os << '\n';
  }
  return os.str();
}

std::string pretty_print(const Program& p) {
  std::ostringstream os;
  if (!p.feature_variables.empty()) {
    os << "# varenc features:";
    for (const auto& f : p.feature_variables) os << ' ' << f;
    os << '\n';
    if (const auto* fm = p.find_function("feature_model"); fm && !fm->body.empty() &&
                                                           fm->body[0].kind == StmtKind::Return)
      os << "# varenc feature_model: " << print_expr(fm->body[0].exprs[0]) << '\n';
    os << '\n';
  }
  for (const auto& r : p.records) {
    print_record(os, r, 0);
    os << '\n';
  }
  for (const auto& g : p.globals) print_global(os, g, 0);
  if (!p.globals.empty()) os << '\n';
  for (const auto& f : p.functions) {
    print_function(os, f);
    os << '\n';
  }
  return os.str();
}

std::string pretty_print(const Automaton& a) {
  std::ostringstream os;
  os << "automaton " << a.name << " {\n";
  if (a.has_introduction) {
    os << "  introduction {\n";
    for (const auto& s : a.shadows) {
      os << "    shadow struct " << s.target_record << " {";
      for (const auto& f : s.added_fields) os << ' ' << print_type(f.type) << ' ' << f.name << ';';
      os << " };\n";
    }
    for (const auto& r : a.records) print_record(os, r, 2);
    for (const auto& g : a.globals) print_global(os, g, 2);
    for (const auto& f : a.functions) {
      std::ostringstream fs;
      print_function(fs, f);
      std::istringstream lines(fs.str());
      std::string line;
      while (std::getline(lines, line)) os << "    " << line << '\n';
    }
    os << "  }\n";
  }
  for (const auto& ic : a.intercepts) {
    os << "\n  " << (ic.position == InterceptPosition::Before ? "before " : "after ");
    if (!ic.return_binding.empty()) os << ic.return_binding << " = ";
    os << print_type(ic.ret) << ' ' << ic.function << '(';
    for (std::size_t i = 0; i < ic.params.size(); ++i) {
      if (i) os << ", ";
      os << ic.params[i].name << ": " << print_type(ic.params[i].type);
    }
    os << ") ";
    std::ostringstream body;
    print_block(body, ic.body, 1);
    os << body.str() << '\n';
  }
  os << "}\n";
  return os.str();
}

}  // namespace fav
