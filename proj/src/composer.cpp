// Copyright The fav authors
// SPDX-License-Identifier: Apache-2.0

#include "fav/composer.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "fav/printer.hpp"
#include "typing.hpp"

namespace fav {

namespace {

struct Layer {
  std::string feature;
  FunctionDecl fn;
};

bool same_signature(const FunctionDecl& a, const FunctionDecl& b) {
  if (a.ret != b.ret || a.params.size() != b.params.size()) return false;
  for (std::size_t i = 0; i < a.params.size(); ++i)
    if (a.params[i].type != b.params[i].type) return false;
  return true;
}

std::string signature_text(const FunctionDecl& f) {
  std::string s = print_type(f.ret) + " " + f.name + "(";
  for (std::size_t i = 0; i < f.params.size(); ++i) s += (i ? ", " : "") + print_type(f.params[i].type);
  return s + ")";
}

void replace_original(std::vector<Stmt>& body, const std::string& target) {
  for_each_expr(body, [&](Expr& e) {
    if (e.kind == ExprKind::Original) {
      e.kind = ExprKind::Call;
      e.name = target;
    }
  });
}

}  // namespace

Program compose_features(const std::vector<FeatureModule>& modules, const Product& features) {
  std::set<std::string> selected(features.begin(), features.end());
  Program out;
  std::map<std::string, std::vector<Layer>> layers;
  std::vector<std::string> fn_order;

  for (const auto& m : modules) {
    if (!selected.count(m.name)) continue;
    for (const auto& r : m.records) {
      RecordDecl* existing = out.find_record(r.name);
      if (!existing) {
        out.records.push_back(RecordDecl{r.name, {}, r.loc});
        out.provenance["record:" + r.name] = m.name;
        existing = &out.records.back();
      }
      for (const auto& f : r.fields) {
        for (const auto& g : existing->fields)
          if (g.name == f.name)
            throw FavError("feature " + m.name + ": field '" + r.name + "." + f.name + "' is introduced twice");
        existing->fields.push_back(f);
        out.provenance["field:" + r.name + "." + f.name] = m.name;
      }
    }
    for (const auto& g : m.globals) {
      if (out.find_global(g.name)) throw FavError("feature " + m.name + ": global '" + g.name + "' is introduced twice");
      out.globals.push_back(g);
      out.provenance["global:" + g.name] = m.name;
    }
    for (const auto* list : {&m.functions, &m.refinements}) {
      for (const auto& f : *list) {
        auto& ls = layers[f.name];
        if (ls.empty()) {
          fn_order.push_back(f.name);
          if (contains_original(f.body))
            throw FavError("feature " + m.name + ": 'original' in '" + f.name + "' refines nothing");
        } else if (!same_signature(ls.front().fn, f)) {
          throw FavError("feature " + m.name + ": refinement " + signature_text(f) + " does not match " +
                         signature_text(ls.front().fn));
        }
        ls.push_back({m.name, f});
      }
    }
  }

  for (const auto& name : fn_order) {
    auto& ls = layers[name];
    for (std::size_t i = 0; i < ls.size(); ++i) {
      FunctionDecl f = ls[i].fn;
      if (i + 1 < ls.size()) f.name = name + "$" + ls[i].feature;
      if (i > 0) replace_original(f.body, name + "$" + ls[i - 1].feature);
      out.provenance["function:" + f.name] = ls[i].feature;
      out.functions.push_back(std::move(f));
    }
  }
  return out;
}

Program compose(const std::vector<FeatureModule>& modules, const FeatureModel& fm, const Product& p) {
  if (!is_valid(fm, p)) throw FavError("invalid product " + to_string(p));
  return compose_features(modules, p);
}

std::vector<OwnedAutomaton> automata_for(const SpecificationSet& specs, const Product& p) {
  std::vector<OwnedAutomaton> out;
  for (const auto& f : p) {
    auto it = specs.find(f);
    if (it == specs.end()) continue;
    for (const auto& a : it->second) out.push_back({f, &a});
  }
  return out;
}

namespace {

/// Renames automaton-private records, globals, and functions inside code
/// that belongs to one automaton.
class PrivateRenamer {
 public:
  PrivateRenamer(const Automaton& a) : a_(a) {
    for (const auto& r : a.records) records_.insert(r.name);
    for (const auto& g : a.globals) globals_.insert(g.name);
    for (const auto& f : a.functions) functions_.insert(f.name);
  }

  Type type(Type t) const {
    if (t.kind == TypeKind::Ref && records_.count(t.record)) t.record = private_name(a_.name, t.record);
    return t;
  }

  std::string function(const std::string& n) const {
    return functions_.count(n) ? private_name(a_.name, n) : n;
  }
  std::string global(const std::string& n) const { return globals_.count(n) ? private_name(a_.name, n) : n; }
  bool is_function(const std::string& n) const { return functions_.count(n) > 0; }

  void body(std::vector<Stmt>& stmts, const std::vector<Param>& params) {
    scopes_.clear();
    scopes_.emplace_back();
    for (const auto& p : params) scopes_.back().insert(p.name);
    block(stmts);
  }

 private:
  bool is_local(const std::string& n) const {
    for (const auto& s : scopes_)
      if (s.count(n)) return true;
    return false;
  }

  void expr(Expr& e) {
    for (auto& a : e.args) expr(a);
    switch (e.kind) {
      case ExprKind::Var:
        if (!is_local(e.name)) e.name = global(e.name);
        break;
      case ExprKind::Call: e.name = function(e.name); break;
      case ExprKind::New:
        if (records_.count(e.name)) e.name = private_name(a_.name, e.name);
        break;
      default: break;
    }
  }

  void block(std::vector<Stmt>& stmts) {
    scopes_.emplace_back();
    for (auto& s : stmts) {
      for (auto& e : s.exprs) expr(e);
      if (s.kind == StmtKind::VarDecl) {
        s.type = type(s.type);
        scopes_.back().insert(s.name);
      }
      block(s.body);
      block(s.else_body);
    }
    scopes_.pop_back();
  }

  const Automaton& a_;
  std::set<std::string> records_, globals_, functions_;
  std::vector<std::set<std::string>> scopes_;
};

/// Program functions without observable effects: no writes outside their
/// own locals, no allocation, no input, no failure, and only pure callees.
std::set<std::string> pure_functions(const Program& p) {
  std::set<std::string> impure;
  std::map<std::string, std::set<std::string>> callees;
  for (const auto& f : p.functions) {
    std::set<std::string> locals;
    for (const auto& prm : f.params) locals.insert(prm.name);
    bool bad = false;
    auto visit = [&](auto& self, const std::vector<Stmt>& body) -> void {
      for (const auto& s : body) {
        if (s.kind == StmtKind::VarDecl) locals.insert(s.name);
        if (s.kind == StmtKind::Fail) bad = true;
        if (s.kind == StmtKind::Assign) {
          const Expr& lhs = s.exprs[0];
          if (lhs.kind != ExprKind::Var || !locals.count(lhs.name)) bad = true;
        }
        for (const auto& e : s.exprs)
          for_each_expr(e, [&](const Expr& x) {
            if (x.kind == ExprKind::New || x.kind == ExprKind::Nondet || x.kind == ExprKind::Original) bad = true;
            if (x.kind == ExprKind::Call) callees[f.name].insert(x.name);
          });
        self(self, s.body);
        self(self, s.else_body);
      }
    };
    visit(visit, f.body);
    if (bad) impure.insert(f.name);
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& [caller, cs] : callees) {
      if (impure.count(caller)) continue;
      for (const auto& c : cs)
        if (impure.count(c) || !p.find_function(c)) {
          impure.insert(caller);
          changed = true;
          break;
        }
    }
  }
  std::set<std::string> pure;
  for (const auto& f : p.functions)
    if (!impure.count(f.name)) pure.insert(f.name);
  return pure;
}

struct HookCall {
  std::string feature;
  std::string hook;
  bool pass_result = false;
};

struct EventHooks {
  std::vector<HookCall> before, after;
};

std::string fresh_function_name(const Program& p, const std::string& base) {
  std::string n = base;
  while (p.find_function(n) || p.find_global(n)) n.insert(n.rfind('$'), "$");
  return n;
}

void label_fails(std::vector<Stmt>& body, const std::string& label) {
  for (auto& s : body) {
    if (s.kind == StmtKind::Fail) s.name = s.name.empty() ? label : label + ": " + s.name;
    label_fails(s.body, label);
    label_fails(s.else_body, label);
  }
}

std::string join_errors(const std::vector<detail::TypeError>& errs) {
  std::string out;
  for (const auto& e : errs) out += "\n  " + to_string(e.loc) + ": " + e.message;
  return out;
}

}  // namespace

Program weave_automata(const Program& program, const std::vector<OwnedAutomaton>& automata,
                       const std::map<std::string, std::string>* guard_variables) {
  Program out = program;
  const std::set<std::string> pure = pure_functions(program);
  std::map<std::string, EventHooks> hooks;
  std::set<std::string> automaton_code;  // functions to retarget to unwrapped callees

  for (const auto& [feature, ap] : automata) {
    const Automaton& a = *ap;
    if (auto rep = check_side_effect_freedom(a, program.records, program.globals); !rep.ok()) {
      const auto& v = rep.violations.front();
      throw FavError("automaton " + a.name + " is not side-effect free: " + v.where + " writes " + v.target +
                     " at " + to_string(v.loc));
    }
    PrivateRenamer ren(a);

    // Private records, globals, functions.
    for (const auto& r : a.records) {
      RecordDecl rr{private_name(a.name, r.name), {}, r.loc};
      for (auto f : r.fields) {
        f.type = ren.type(f.type);
        rr.fields.push_back(std::move(f));
      }
      out.provenance["record:" + rr.name] = feature;
      out.records.push_back(std::move(rr));
    }
    for (auto g : a.globals) {
      g.name = private_name(a.name, g.name);
      g.type = ren.type(g.type);
      out.provenance["global:" + g.name] = feature;
      out.globals.push_back(std::move(g));
    }
    std::vector<FunctionDecl> code;
    for (auto f : a.functions) {
      f.name = private_name(a.name, f.name);
      f.ret = ren.type(f.ret);
      for (auto& p : f.params) p.type = ren.type(p.type);
      ren.body(f.body, f.params);
      code.push_back(std::move(f));
    }

    // Hooks.
    for (std::size_t i = 0; i < a.intercepts.size(); ++i) {
      const Intercept& ic = a.intercepts[i];
      const FunctionDecl* target = program.find_function(ic.function);
      if (!target)
        throw FavError("automaton " + a.name + " intercepts '" + ic.function + "', which the product lacks");
      bool ok = target->ret == ic.ret && target->params.size() == ic.params.size();
      for (std::size_t k = 0; ok && k < ic.params.size(); ++k) ok = target->params[k].type == ic.params[k].type;
      if (!ok)
        throw FavError("automaton " + a.name + ": intercept signature does not match " + signature_text(*target));
      FunctionDecl h;
      bool before = ic.position == InterceptPosition::Before;
      h.name = private_name(a.name, std::string(before ? "before$" : "after$") + ic.function);
      while (out.find_function(h.name) ||
             std::any_of(code.begin(), code.end(), [&](const FunctionDecl& c) { return c.name == h.name; }))
        h.name += "$";
      h.ret = Type::void_();
      h.loc = ic.loc;
      for (std::size_t k = 0; k < ic.params.size(); ++k) {
        std::string n = ic.params[k].name == "_" ? "_$" + std::to_string(k) : ic.params[k].name;
        h.params.push_back({n, ic.params[k].type});
      }
      if (!ic.return_binding.empty()) h.params.push_back({ic.return_binding, ic.ret});
      h.body = ic.body;
      ren.body(h.body, h.params);
      label_fails(h.body, site_label(a, i));
      auto& eh = hooks[ic.function];
      (before ? eh.before : eh.after).push_back({feature, h.name, !ic.return_binding.empty()});
      code.push_back(std::move(h));
    }

    // Resolve shadow fields against a view that shows this automaton's
    // shadows under their source names.
    Program view = out;
    std::map<std::string, std::set<std::string>> shadow_names;
    for (const auto& sd : a.shadows) {
      RecordDecl* r = nullptr;
      for (auto& rec : view.records)
        if (rec.name == sd.target_record && program.find_record(rec.name)) r = &rec;
      if (!r) throw FavError("automaton " + a.name + " shadows unknown record '" + sd.target_record + "'");
      RecordDecl* real = out.find_record(sd.target_record);
      for (const auto& f : sd.added_fields) {
        for (const auto& g : r->fields)
          if (g.name == f.name)
            throw FavError("automaton " + a.name + ": shadow field '" + f.name + "' collides on record '" +
                           r->name + "'");
        r->fields.push_back({f.name, ren.type(f.type), f.loc});
        real->fields.push_back({private_name(a.name, f.name), ren.type(f.type), f.loc});
        out.provenance["field:" + real->name + "." + private_name(a.name, f.name)] = feature;
        shadow_names[r->name].insert(f.name);
      }
    }
    for (const auto& f : code) view.functions.push_back(f);
    detail::BodyTyper typer(view);
    typer.on_field = [&](Expr& e, const std::string& record) {
      auto it = shadow_names.find(record);
      if (it != shadow_names.end() && it->second.count(e.name)) e.name = private_name(a.name, e.name);
    };
    for (auto& f : code) typer.check_function(f);
    if (!typer.errors.empty()) throw FavError("automaton " + a.name + " does not type check:" + join_errors(typer.errors));

    for (auto& f : code) {
      for_each_expr(f.body, [&](const Expr& e) {
        if (e.kind == ExprKind::Call && !e.name.starts_with(a.name + "::") && !pure.count(e.name))
          throw FavError("automaton " + a.name + " calls '" + e.name + "', which has side effects");
      });
      out.provenance["function:" + f.name] = feature;
      automaton_code.insert(f.name);
      out.functions.push_back(std::move(f));
    }
  }

  // Wrap every intercepted function.
  std::map<std::string, std::string> inner_of;
  for (const auto& [event, eh] : hooks) {
    FunctionDecl* f = out.find_function(event);
    auto prov = out.provenance.find("function:" + event);
    std::string owner = prov == out.provenance.end() ? std::string("base") : prov->second;
    std::string inner = fresh_function_name(out, event + "$" + owner);
    inner_of[event] = inner;
    FunctionDecl wrapper;
    wrapper.name = event;
    wrapper.ret = f->ret;
    wrapper.params = f->params;
    wrapper.loc = f->loc;
    f->name = inner;
    out.provenance["function:" + inner] = owner;

    std::vector<Expr> args;
    for (const auto& p : wrapper.params) args.push_back(Expr::var(p.name));
    auto hook_stmt = [&](const HookCall& hc, bool with_result) {
      std::vector<Expr> hargs = args;
      if (with_result) hargs.push_back(Expr::var("$result"));
      Stmt call{StmtKind::ExprStmt};
      call.exprs.push_back(Expr::call(hc.hook, std::move(hargs)));
      if (!guard_variables) return call;
      Stmt guarded{StmtKind::If};
      guarded.exprs.push_back(Expr::var(guard_variables->at(hc.feature)));
      guarded.body.push_back(std::move(call));
      return guarded;
    };
    for (const auto& hc : eh.before) wrapper.body.push_back(hook_stmt(hc, false));
    bool has_result = wrapper.ret.kind != TypeKind::Void;
    if (has_result) {
      Stmt decl{StmtKind::VarDecl};
      decl.type = wrapper.ret;
      decl.name = "$result";
      decl.exprs.push_back(Expr::call(inner, args));
      wrapper.body.push_back(std::move(decl));
    } else {
      Stmt call{StmtKind::ExprStmt};
      call.exprs.push_back(Expr::call(inner, args));
      wrapper.body.push_back(std::move(call));
    }
    for (const auto& hc : eh.after) wrapper.body.push_back(hook_stmt(hc, hc.pass_result));
    if (has_result) {
      Stmt ret{StmtKind::Return};
      ret.exprs.push_back(Expr::var("$result"));
      wrapper.body.push_back(std::move(ret));
    }
    // The wrapper sits right after the function it wraps.
    auto pos = std::find_if(out.functions.begin(), out.functions.end(),
                            [&](const FunctionDecl& g) { return g.name == inner; });
    out.functions.insert(pos + 1, std::move(wrapper));
  }

  // Automaton code reads program state without re-triggering hooks.
  for (auto& f : out.functions) {
    if (!automaton_code.count(f.name)) continue;
    for_each_expr(f.body, [&](Expr& e) {
      if (e.kind == ExprKind::Call)
        if (auto it = inner_of.find(e.name); it != inner_of.end()) e.name = it->second;
    });
  }
  return out;
}

Program weave(const Program& composed, const SpecificationSet& specs, const Product& p) {
  return weave_automata(composed, automata_for(specs, p));
}

std::string provenance_json(const Program& p) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : p.provenance) j[k] = v;
  return j.dump(2);
}

}  // namespace fav
