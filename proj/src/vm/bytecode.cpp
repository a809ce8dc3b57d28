// Copyright The fav authors
// SPDX-License-Identifier: Apache-2.0

#include "vm/bytecode.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "fav/printer.hpp"
#include "fav/typecheck.hpp"
#include "typing.hpp"

namespace fav::vm {

namespace {

class Compiler {
 public:
  Compiler(const Program& p, int unroll) : p_(p), unroll_(unroll) {}

  Compiled run() {
    auto errors = typecheck_program(p_);
    if (!errors.empty()) {
      std::string msg = "program does not type check:";
      for (std::size_t i = 0; i < errors.size() && i < 10; ++i) msg += "\n  " + errors[i];
      throw FavError(msg);
    }
    out_.symbols.push_back("");
    symbol_ids_[""] = 0;
    for (std::size_t i = 0; i < p_.records.size(); ++i) {
      const auto& r = p_.records[i];
      rec_index_[r.name] = static_cast<int>(i);
      RecordInfo info{r.name, {}};
      for (std::size_t j = 0; j < r.fields.size(); ++j) {
        field_index_[r.name][r.fields[j].name] = static_cast<int>(j);
        info.defaults.push_back(default_value(r.fields[j].type));
      }
      out_.records.push_back(std::move(info));
    }
    for (std::size_t i = 0; i < p_.globals.size(); ++i) {
      const auto& g = p_.globals[i];
      glob_index_[g.name] = static_cast<int>(i);
      out_.global_names.push_back(g.name);
      out_.globals.push_back(g.init ? literal(*g.init) : default_value(g.type));
    }
    if (p_.feature_variables.size() > static_cast<std::size_t>(ProductSet::kMaxVariables))
      throw FavError("too many feature variables (limit 16)");
    for (std::size_t i = 0; i < p_.feature_variables.size(); ++i) {
      const auto& v = p_.feature_variables[i];
      const GlobalDecl* g = p_.find_global(v);
      if (!g || g->type.kind != TypeKind::Bool) throw FavError("feature variable '" + v + "' is not a bool global");
      fvar_index_[v] = static_cast<int>(i);
    }
    out_.feature_variables = p_.feature_variables;
    for (std::size_t i = 0; i < p_.functions.size(); ++i) fn_index_[p_.functions[i].name] = static_cast<int>(i);
    for (const auto& f : p_.functions) compile_function(f);
    auto it = fn_index_.find(p_.entry);
    if (it == fn_index_.end()) throw FavError("entry function '" + p_.entry + "' is missing");
    out_.entry = it->second;
    return std::move(out_);
  }

 private:
  Value default_value(const Type& t) {
    switch (t.kind) {
      case TypeKind::Int: return {VKind::Int, 0};
      case TypeKind::Bool: return {VKind::Bool, 0};
      case TypeKind::Symbol: return {VKind::Sym, 0};
      default: return {VKind::Null, 0};
    }
  }

  std::int64_t intern(const std::string& s) {
    auto [it, fresh] = symbol_ids_.emplace(s, static_cast<std::int64_t>(out_.symbols.size()));
    if (fresh) out_.symbols.push_back(s);
    return it->second;
  }

  Value literal(const Expr& e) {
    switch (e.kind) {
      case ExprKind::IntLit: return {VKind::Int, e.int_value};
      case ExprKind::BoolLit: return {VKind::Bool, e.int_value};
      case ExprKind::SymLit: return {VKind::Sym, intern(e.name)};
      default: return {VKind::Null, 0};
    }
  }

  // ---- per-function state ----

  std::size_t emit(Instr i) {
    fc_->code.push_back(i);
    return fc_->code.size() - 1;
  }
  std::int32_t here() const { return static_cast<std::int32_t>(fc_->code.size()); }

  int declare(const std::string& name, const Type& t) {
    int slot = fc_->locals++;
    scopes_.back().push_back({name, slot, t});
    return slot;
  }

  const std::pair<int, Type>* lookup_local(const std::string& name) {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it)
      for (auto jt = it->rbegin(); jt != it->rend(); ++jt)
        if (jt->name == name) {
          found_ = {jt->slot, jt->type};
          return &found_;
        }
    return nullptr;
  }

  void open_scope() { scopes_.emplace_back(); }
  // Out-of-scope slots are reset so that otherwise equal states compare equal.
  void close_scope() {
    for (const auto& l : scopes_.back()) {
      emit({Opc::Const, Op::None, 0, 0, 0, 0, default_value(l.type)});
      emit({Opc::StoreL, Op::None, l.slot});
    }
    scopes_.pop_back();
  }

  int add_stmt(const Stmt& s, std::string condition = {}) {
    StmtInfo info;
    info.loc = s.loc;
    info.function = fn_name_;
    info.text = print_stmt_head(s);
    auto it = p_.provenance.find("function:" + fn_name_);
    if (it != p_.provenance.end()) info.feature = it->second;
    info.condition = std::move(condition);
    out_.stmts.push_back(std::move(info));
    return static_cast<int>(out_.stmts.size() - 1);
  }

  void compile_function(const FunctionDecl& decl) {
    FunctionDecl f = decl;
    field_rec_.clear();
    detail::BodyTyper typer(p_);
    typer.on_field = [&](Expr& e, const std::string& rec) { field_rec_[&e] = rec; };
    typer.check_function(f);

    out_.functions.push_back({f.name, static_cast<int>(f.params.size()), 0, f.ret.kind != TypeKind::Void, {}});
    fc_ = &out_.functions.back();
    fn_name_ = f.name;
    scopes_.clear();
    scopes_.emplace_back();
    for (const auto& prm : f.params) declare(prm.name, prm.type);
    pending_.clear();
    block(f.body);
    emit({f.ret.kind == TypeKind::Void ? Opc::RetVoid : Opc::MissingRet});
  }

  void block(const std::vector<Stmt>& body) {
    open_scope();
    for (const auto& s : body) stmt(s);
    close_scope();
  }

  void stmt(const Stmt& s) {
    pending_.emplace_back();
    switch (s.kind) {
      case StmtKind::VarDecl: {
        emit({Opc::Step, Op::None, add_stmt(s)});
        if (!s.exprs.empty())
          expr(s.exprs[0]);
        else
          emit({Opc::Const, Op::None, 0, 0, 0, 0, default_value(s.type)});
        int slot = declare(s.name, s.type);
        emit({Opc::StoreL, Op::None, slot});
        break;
      }
      case StmtKind::Assign: {
        emit({Opc::Step, Op::None, add_stmt(s)});
        const Expr& lhs = s.exprs[0];
        if (lhs.kind == ExprKind::Var) {
          expr(s.exprs[1]);
          store_var(lhs);
        } else {
          expr(lhs.args[0]);
          expr(s.exprs[1]);
          emit({Opc::SetF, Op::None, field_of(lhs)});
        }
        break;
      }
      case StmtKind::ExprStmt: {
        emit({Opc::Step, Op::None, add_stmt(s)});
        bool value = expr(s.exprs[0]);
        if (value) emit({Opc::Pop});
        break;
      }
      case StmtKind::If: {
        int id = add_stmt(s, print_expr(s.exprs[0]));
        expr(s.exprs[0]);
        std::size_t jf = emit({Opc::JumpF, Op::None, 0, id});
        block(s.body);
        std::size_t j = emit({Opc::Jump});
        fc_->code[jf].a = here();
        block(s.else_body);
        fc_->code[j].a = here();
        break;
      }
      case StmtKind::While: {
        int id = add_stmt(s, print_expr(s.exprs[0]));
        open_scope();
        int counter = declare("$loop", Type::int_());
        emit({Opc::LoopInit, Op::None, counter});
        std::int32_t top = here();
        expr(s.exprs[0]);
        std::size_t jf = emit({Opc::JumpF, Op::None, 0, id});
        emit({Opc::LoopTick, Op::None, counter, 0, std::min<std::int64_t>(s.bound, unroll_),
              s.bound <= unroll_ ? 0 : 1});
        block(s.body);
        emit({Opc::Jump, Op::None, top});
        fc_->code[jf].a = here();
        close_scope();
        break;
      }
      case StmtKind::Return:
        emit({Opc::Step, Op::None, add_stmt(s)});
        if (s.exprs.empty()) {
          emit({Opc::RetVoid});
        } else {
          expr(s.exprs[0]);
          emit({Opc::Ret});
        }
        break;
      case StmtKind::Block: block(s.body); break;
      case StmtKind::Fail: {
        emit({Opc::Step, Op::None, add_stmt(s)});
        out_.labels.push_back(s.name);
        emit({Opc::Fail, Op::None, static_cast<std::int32_t>(out_.labels.size() - 1)});
        break;
      }
    }
    // Choice points join at the end of their innermost statement.
    for (std::size_t idx : pending_.back()) {
      Instr& in = fc_->code[idx];
      if (in.op == Opc::FeatExpr)
        in.c = here();
      else
        in.b = here();
    }
    pending_.pop_back();
  }

  void store_var(const Expr& lhs) {
    if (auto* l = lookup_local(lhs.name)) {
      emit({Opc::StoreL, Op::None, l->first});
      return;
    }
    if (fvar_index_.count(lhs.name)) throw FavError("assignment to feature variable '" + lhs.name + "'");
    emit({Opc::StoreG, Op::None, glob_index_.at(lhs.name)});
  }

  std::int32_t field_of(const Expr& e) {
    auto it = field_rec_.find(&e);
    if (it == field_rec_.end()) throw FavError("unresolved field '" + e.name + "'");
    return field_index_.at(it->second).at(e.name);
  }

  bool is_feature_expr(const Expr& e, bool& has_var) {
    switch (e.kind) {
      case ExprKind::BoolLit: return true;
      case ExprKind::Var:
        if (lookup_local(e.name) || !fvar_index_.count(e.name)) return false;
        has_var = true;
        return true;
      case ExprKind::Unary: return e.op == Op::Not && is_feature_expr(e.args[0], has_var);
      case ExprKind::Binary:
        return (e.op == Op::And || e.op == Op::Or) && is_feature_expr(e.args[0], has_var) &&
               is_feature_expr(e.args[1], has_var);
      default: return false;
    }
  }

  bool eval_feature_expr(const Expr& e, std::uint32_t a) {
    switch (e.kind) {
      case ExprKind::BoolLit: return e.int_value != 0;
      case ExprKind::Var: return (a >> fvar_index_.at(e.name)) & 1u;
      case ExprKind::Unary: return !eval_feature_expr(e.args[0], a);
      case ExprKind::Binary:
        return e.op == Op::And ? eval_feature_expr(e.args[0], a) && eval_feature_expr(e.args[1], a)
                               : eval_feature_expr(e.args[0], a) || eval_feature_expr(e.args[1], a);
      default: return false;
    }
  }

  /// Emits code pushing e's value; returns false for void calls.
  bool expr(const Expr& e) {
    bool has_var = false;
    if (!fvar_index_.empty() && is_feature_expr(e, has_var) && has_var) {
      int k = static_cast<int>(fvar_index_.size());
      ProductSet truth(k, false);
      for (std::uint32_t a = 0; a < truth.universe(); ++a)
        if (eval_feature_expr(e, a)) truth.set(a);
      out_.feature_exprs.push_back(std::move(truth));
      pending_.back().push_back(emit({Opc::FeatExpr, Op::None,
                                      static_cast<std::int32_t>(out_.feature_exprs.size() - 1)}));
      return true;
    }
    switch (e.kind) {
      case ExprKind::IntLit:
      case ExprKind::BoolLit:
      case ExprKind::SymLit:
      case ExprKind::NullLit: emit({Opc::Const, Op::None, 0, 0, 0, 0, literal(e)}); return true;
      case ExprKind::Var:
        if (auto* l = lookup_local(e.name)) {
          emit({Opc::LoadL, Op::None, l->first});
        } else {
          emit({Opc::LoadG, Op::None, glob_index_.at(e.name)});
        }
        return true;
      case ExprKind::Field:
        expr(e.args[0]);
        emit({Opc::GetF, Op::None, field_of(e)});
        return true;
      case ExprKind::Call: {
        for (const auto& a : e.args) expr(a);
        int fi = fn_index_.at(e.name);
        emit({Opc::Call, Op::None, fi, static_cast<std::int32_t>(e.args.size())});
        return p_.functions[static_cast<std::size_t>(fi)].ret.kind != TypeKind::Void;
      }
      case ExprKind::Original: throw FavError("'original' left in a flat program");
      case ExprKind::Nondet:
        pending_.back().push_back(emit({Opc::Nondet, Op::None, 0, 0, e.int_value, e.hi}));
        return true;
      case ExprKind::New: emit({Opc::New, Op::None, rec_index_.at(e.name)}); return true;
      case ExprKind::Unary:
        expr(e.args[0]);
        emit({Opc::Un, e.op});
        return true;
      case ExprKind::Binary:
        if (e.op == Op::And || e.op == Op::Or) {
          expr(e.args[0]);
          std::size_t jf = emit({Opc::JumpF, Op::None, 0, -1});
          if (e.op == Op::And) {
            expr(e.args[1]);
            std::size_t j = emit({Opc::Jump});
            fc_->code[jf].a = here();
            emit({Opc::Const, Op::None, 0, 0, 0, 0, Value{VKind::Bool, 0}});
            fc_->code[j].a = here();
          } else {
            emit({Opc::Const, Op::None, 0, 0, 0, 0, Value{VKind::Bool, 1}});
            std::size_t j = emit({Opc::Jump});
            fc_->code[jf].a = here();
            expr(e.args[1]);
            fc_->code[j].a = here();
          }
          return true;
        }
        expr(e.args[0]);
        expr(e.args[1]);
        emit({Opc::Bin, e.op});
        return true;
    }
    return true;
  }

  struct Local {
    std::string name;
    int slot;
    Type type;
  };

  const Program& p_;
  std::int64_t unroll_;
  Compiled out_;
  std::map<std::string, int> fn_index_, rec_index_, glob_index_, fvar_index_;
  std::map<std::string, std::map<std::string, int>> field_index_;
  std::unordered_map<std::string, std::int64_t> symbol_ids_;
  std::unordered_map<const Expr*, std::string> field_rec_;

  FunctionCode* fc_ = nullptr;
  std::string fn_name_;
  std::vector<std::vector<Local>> scopes_;
  std::vector<std::vector<std::size_t>> pending_;
  std::pair<int, Type> found_;
};

}  // namespace

Compiled compile(const Program& p, int unroll_bound) { return Compiler(p, unroll_bound).run(); }

}  // namespace fav::vm
