// Copyright The fav authors
// SPDX-License-Identifier: Apache-2.0

#include "fav/varenc.hpp"

#include <set>

#include "fav/composer.hpp"

namespace fav {

namespace {

constexpr int kFreshLimit = 1000;

void collect_identifiers(const std::vector<Stmt>& body, std::set<std::string>& out) {
  for (const auto& s : body) {
    if (s.kind == StmtKind::VarDecl) out.insert(s.name);
    for (const auto& e : s.exprs)
      for_each_expr(e, [&](const Expr& x) {
        if (x.kind == ExprKind::Var || x.kind == ExprKind::Call || x.kind == ExprKind::Field ||
            x.kind == ExprKind::New)
          out.insert(x.name);
      });
    collect_identifiers(s.body, out);
    collect_identifiers(s.else_body, out);
  }
}

std::set<std::string> all_identifiers(const std::vector<FeatureModule>& modules) {
  std::set<std::string> out;
  for (const auto& m : modules) {
    for (const auto& r : m.records) {
      out.insert(r.name);
      for (const auto& f : r.fields) out.insert(f.name);
    }
    for (const auto& g : m.globals) out.insert(g.name);
    for (const auto* list : {&m.functions, &m.refinements})
      for (const auto& f : *list) {
        out.insert(f.name);
        for (const auto& p : f.params) out.insert(p.name);
        collect_identifiers(f.body, out);
      }
  }
  return out;
}

std::string fresh(const std::string& base, std::set<std::string>& taken) {
  if (taken.insert(base).second) return base;
  for (int i = 1; i <= kFreshLimit; ++i) {
    std::string n = base + "_" + std::to_string(i);
    if (taken.insert(n).second) return n;
  }
  throw FavError("cannot choose a fresh name for '" + base + "'");
}

std::vector<Expr> param_args(const FunctionDecl& f) {
  std::vector<Expr> args;
  for (const auto& p : f.params) args.push_back(Expr::var(p.name));
  return args;
}

Stmt call_stmt(const FunctionDecl& f, const std::string& callee) {
  Stmt s;
  if (f.ret.kind == TypeKind::Void) {
    s.kind = StmtKind::ExprStmt;
  } else {
    s.kind = StmtKind::Return;
  }
  s.exprs.push_back(Expr::call(callee, param_args(f)));
  return s;
}

Stmt block_of(Stmt s) {
  Stmt b{StmtKind::Block};
  b.body.push_back(std::move(s));
  return b;
}

struct Layer {
  std::string feature;
  FunctionDecl fn;
};

}  // namespace

Simulator var_enc(const std::vector<FeatureModule>& modules, const FeatureModel& fm) {
  Simulator sim;
  sim.features = fm.features();
  Program& out = sim.program;
  std::set<std::string> taken = all_identifiers(modules);

  for (const auto& m : modules)
    if (!fm.index_of(m.name)) throw FavError("module '" + m.name + "' is not a feature of the feature model");

  std::vector<std::string> vars;
  for (const auto& f : sim.features) {
    std::string v = fresh(f, taken);
    sim.variable_of[f] = v;
    vars.push_back(v);
    out.globals.push_back({v, Type::bool_(), std::nullopt, {}});
    out.provenance["global:" + v] = f;
  }
  out.feature_variables = vars;

  // Everything of every module is present; same-named introductions from
  // two features are alternative definitions.
  std::map<std::string, std::vector<Layer>> layers;
  std::vector<std::string> fn_order;
  for (const auto& m : modules) {
    for (const auto& r : m.records) {
      RecordDecl* existing = out.find_record(r.name);
      if (!existing) {
        out.records.push_back({r.name, {}, r.loc});
        out.provenance["record:" + r.name] = m.name;
        existing = &out.records.back();
      }
      for (const auto& f : r.fields) {
        for (const auto& g : existing->fields)
          if (g.name == f.name)
            throw FavError("alternative definitions of field '" + r.name + "." + f.name + "' are not supported");
        existing->fields.push_back(f);
        out.provenance["field:" + r.name + "." + f.name] = m.name;
      }
    }
    for (const auto& g : m.globals) {
      if (out.find_global(g.name))
        throw FavError("alternative definitions of global '" + g.name + "' are not supported");
      out.globals.push_back(g);
      out.provenance["global:" + g.name] = m.name;
    }
    for (const auto* list : {&m.functions, &m.refinements})
      for (const auto& f : *list) {
        auto& ls = layers[f.name];
        if (ls.empty()) {
          fn_order.push_back(f.name);
          if (contains_original(f.body))
            throw FavError("feature " + m.name + ": 'original' in '" + f.name + "' refines nothing");
        } else if (ls.front().fn.ret != f.ret || ls.front().fn.params.size() != f.params.size()) {
          throw FavError("feature " + m.name + ": refinement of '" + f.name + "' changes its signature");
        } else {
          for (std::size_t i = 0; i < f.params.size(); ++i)
            if (ls.front().fn.params[i].type != f.params[i].type)
              throw FavError("feature " + m.name + ": refinement of '" + f.name + "' changes its signature");
        }
        ls.push_back({m.name, f});
      }
  }

  sim.feature_model_function = fresh("feature_model", taken);
  FunctionDecl fmf{sim.feature_model_function, Type::bool_(), {}, {}, {}};
  Stmt ret{StmtKind::Return};
  ret.exprs.push_back(formula_to_expr(encode_dnf(fm), sim.features, vars));
  fmf.body.push_back(std::move(ret));
  out.provenance["function:" + fmf.name] = "feature model";
  out.functions.push_back(std::move(fmf));

  for (const auto& name : fn_order) {
    auto& ls = layers[name];
    if (ls.size() == 1) {
      out.provenance["function:" + name] = ls[0].feature;
      out.functions.push_back(ls[0].fn);
      continue;
    }
    // Body of layer i is `name$f_i`; dispatcher D_i picks layer i when f_i
    // holds and falls back to D_{i-1}. D_0 is the base body itself.
    auto body_name = [&](std::size_t i) { return name + "$" + ls[i].feature; };
    auto dispatcher_name = [&](std::size_t i) {
      if (i == 0) return body_name(0);
      return i + 1 == ls.size() ? name : name + "$$" + ls[i].feature;
    };
    for (std::size_t i = 0; i < ls.size(); ++i) {
      FunctionDecl f = ls[i].fn;
      f.name = body_name(i);
      if (i > 0)
        for_each_expr(f.body, [&](Expr& e) {
          if (e.kind == ExprKind::Original) {
            e.kind = ExprKind::Call;
            e.name = dispatcher_name(i - 1);
          }
        });
      out.provenance["function:" + f.name] = ls[i].feature;
      out.functions.push_back(std::move(f));
    }
    for (std::size_t i = ls.size() - 1; i >= 1; --i) {
      const FunctionDecl& top = ls[i].fn;
      FunctionDecl d{dispatcher_name(i), top.ret, top.params, {}, top.loc};
      Stmt branch{StmtKind::If};
      branch.exprs.push_back(Expr::var(sim.variable_of.at(ls[i].feature)));
      branch.body.push_back(block_of(call_stmt(top, body_name(i))));
      branch.else_body.push_back(block_of(call_stmt(top, dispatcher_name(i - 1))));
      branch.has_else = true;
      d.body.push_back(std::move(branch));
      out.provenance["function:" + d.name] = ls[i].feature;
      out.functions.push_back(std::move(d));
    }
  }

  FunctionDecl* entry = out.find_function(out.entry);
  if (!entry) throw FavError("no module defines the entry function '" + out.entry + "'");
  Stmt guard{StmtKind::If};
  guard.exprs.push_back(Expr::call(sim.feature_model_function, {}));
  Stmt inner{StmtKind::Block};
  inner.body = std::move(entry->body);
  guard.body.push_back(std::move(inner));
  entry->body.clear();
  entry->body.push_back(std::move(guard));
  return sim;
}

Program select(const Simulator& s, const Product& p) {
  std::set<std::string> on(p.begin(), p.end());
  for (const auto& f : p)
    if (!s.variable_of.count(f)) throw FavError("unknown feature '" + f + "'");
  Program out = s.program;
  for (auto& g : out.globals)
    for (const auto& [f, v] : s.variable_of)
      if (g.name == v) g.init = Expr::bool_lit(on.count(f) > 0);
  out.feature_variables.clear();
  return out;
}

Simulator weave_simulator(const Simulator& s, const std::vector<OwnedAutomaton>& automata) {
  Simulator out = s;
  out.program = weave_automata(s.program, automata, &s.variable_of);
  return out;
}

Simulator weave_simulator(const Simulator& s, const SpecificationSet& specs) {
  return weave_simulator(s, automata_for(specs, s.features));
}

}  // namespace fav
