// Copyright The fav authors
// SPDX-License-Identifier: Apache-2.0

#include "fav/typecheck.hpp"

#include <set>

#include "fav/composer.hpp"
#include "typing.hpp"

namespace fav {

std::vector<std::string> typecheck_program(const Program& p) {
  std::vector<std::string> out;
  std::set<std::string> names;
  for (const auto& r : p.records) {
    if (!names.insert("record " + r.name).second) out.push_back("duplicate record '" + r.name + "'");
    std::set<std::string> fields;
    for (const auto& f : r.fields) {
      if (!fields.insert(f.name).second) out.push_back("duplicate field '" + r.name + "." + f.name + "'");
      if (f.type.kind == TypeKind::Void || f.type.kind == TypeKind::Null ||
          (f.type.kind == TypeKind::Ref && !p.find_record(f.type.record)))
        out.push_back("bad type for field '" + r.name + "." + f.name + "'");
    }
  }
  for (const auto& g : p.globals) {
    if (!names.insert("global " + g.name).second) out.push_back("duplicate global '" + g.name + "'");
    if (g.type.kind == TypeKind::Void || g.type.kind == TypeKind::Null ||
        (g.type.kind == TypeKind::Ref && !p.find_record(g.type.record)))
      out.push_back("bad type for global '" + g.name + "'");
    if (g.init) {
      Type it = g.init->kind == ExprKind::IntLit    ? Type::int_()
                : g.init->kind == ExprKind::BoolLit ? Type::bool_()
                : g.init->kind == ExprKind::SymLit  ? Type::symbol()
                                                    : Type::null();
      if (!detail::assignable(g.type, it)) out.push_back("bad initializer for global '" + g.name + "'");
    }
  }
  for (const auto& f : p.functions)
    if (!names.insert("function " + f.name).second) out.push_back("duplicate function '" + f.name + "'");

  detail::BodyTyper typer(p);
  for (auto f : p.functions) typer.check_function(f);
  for (const auto& e : typer.errors) out.push_back(e.message + " (" + to_string(e.loc) + ")");

  const FunctionDecl* entry = p.find_function(p.entry);
  if (!entry)
    out.push_back("entry function '" + p.entry + "' is missing");
  else if (!entry->params.empty() || entry->ret.kind != TypeKind::Void)
    out.push_back("entry function '" + p.entry + "' must be 'void " + p.entry + "()'");
  return out;
}

TypeReport typecheck_product_line(const std::vector<FeatureModule>& modules, const FeatureModel& fm) {
  TypeReport rep;
  for (const auto& p : enumerate_products(fm)) {
    try {
      for (auto& msg : typecheck_program(compose_features(modules, p))) rep.issues.push_back({p, std::move(msg)});
    } catch (const FavError& e) {
      rep.issues.push_back({p, e.what()});
    }
  }
  return rep;
}

}  // namespace fav
