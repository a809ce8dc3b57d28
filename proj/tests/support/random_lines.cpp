// Copyright The fav authors
// SPDX-License-Identifier: Apache-2.0

#include "support/random_lines.hpp"

#include <sstream>

#include "fav/parser.hpp"
#include "fav/spec_lang.hpp"

namespace fav::testsupport {

namespace {

struct Scope {
  std::vector<std::vector<std::string>> frames;  // readable/writable int variables
  std::vector<std::string> callees;               // int f(int) functions
  bool allow_calls = true;
  bool allow_nondet = true;
  bool allow_fault = true;
  int loops = 0;

  std::vector<std::string> vars() const {
    std::vector<std::string> out;
    for (const auto& f : frames) out.insert(out.end(), f.begin(), f.end());
    return out;
  }
};

class Gen {
 public:
  explicit Gen(Rng& rng) : rng_(rng) {}

  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }
  template <class T>
  const T& one_of(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(pick(0, static_cast<int>(v.size()) - 1))];
  }

  std::string fresh(const std::string& stem) { return stem + std::to_string(counter_++); }

  // Per-function budgets keep the number of executions small.
  void budget(int nondets, int calls) {
    nondets_ = chance(0.5) ? nondets : 0;
    calls_ = calls;
  }

  static bool take(int& left) { return left > 0 && left--; }

  std::string int_expr(Scope& sc, int depth) {
    auto vars = sc.vars();
    int r = depth <= 0 ? pick(0, 3) : pick(0, 10);
    if (r <= 1 || (r <= 3 && vars.empty())) return std::to_string(pick(-1, 3));
    if (r <= 3) return one_of(vars);
    if (r == 4 && sc.allow_nondet && take(nondets_)) return "nondet(0, " + std::to_string(pick(1, 2)) + ")";
    if (r == 5 && sc.allow_calls && !sc.callees.empty() && take(calls_))
      return one_of(sc.callees) + "(" + int_expr(sc, depth - 1) + ")";
    if (r == 6) return "(" + int_expr(sc, depth - 1) + ") * 2";
    if (r == 7) {
      if (sc.allow_fault && !vars.empty() && chance(0.05)) return int_expr(sc, depth - 1) + " / " + one_of(vars);
      return "(" + int_expr(sc, depth - 1) + ") " + (chance(0.5) ? "/ " : "% ") + std::to_string(pick(2, 3));
    }
    if (r == 8) return "-(" + int_expr(sc, depth - 1) + ")";
    return int_expr(sc, depth - 1) + (chance(0.5) ? " + " : " - ") + int_expr(sc, depth - 1);
  }

  std::string bool_expr(Scope& sc, int depth) {
    int r = depth <= 0 ? 0 : pick(0, 5);
    if (r <= 2) {
      static const std::vector<std::string> cmp = {"<", "<=", ">", ">=", "==", "!="};
      return int_expr(sc, 1) + " " + one_of(cmp) + " " + int_expr(sc, 1);
    }
    if (r == 3) return "!(" + bool_expr(sc, depth - 1) + ")";
    if (r == 4) return "(" + bool_expr(sc, depth - 1) + ") && (" + bool_expr(sc, depth - 1) + ")";
    return "(" + bool_expr(sc, depth - 1) + ") || (" + bool_expr(sc, depth - 1) + ")";
  }

  void stmts(std::ostringstream& os, Scope& sc, int count, int depth, const std::string& ind) {
    for (int i = 0; i < count; ++i) stmt(os, sc, depth, ind);
  }

  void stmt(std::ostringstream& os, Scope& sc, int depth, const std::string& ind) {
    auto vars = sc.vars();
    int r = pick(0, 9);
    if (depth > 0 && r == 0) {
      os << ind << "if (" << bool_expr(sc, 1) << ") {\n";
      block(os, sc, depth - 1, ind);
      if (chance(0.5)) {
        os << ind << "} else {\n";
        block(os, sc, depth - 1, ind);
      }
      os << ind << "}\n";
      return;
    }
    if (depth > 0 && r == 1 && sc.loops < 2) {
      std::string i = fresh("i");
      int limit = pick(1, 3);
      int bound = chance(0.95) ? pick(limit, 3) : limit - 1;
      os << ind << "int " << i << " = 0;\n";
      os << ind << "while (" << i << " < " << limit << ") bound " << bound << " {\n";
      ++sc.loops;
      sc.frames.emplace_back();
      int nondets = nondets_, calls = calls_;
      budget(0, 0);
      stmts(os, sc, pick(1, 2), depth - 1, ind + "  ");
      budget(nondets, calls);
      sc.frames.pop_back();
      --sc.loops;
      os << ind << "  " << i << " = " << i << " + 1;\n";
      os << ind << "}\n";
      return;
    }
    if (r == 2) {
      std::string t = fresh("t");
      os << ind << "int " << t << " = " << int_expr(sc, 2) << ";\n";
      sc.frames.back().push_back(t);
      return;
    }
    if (r == 3 && sc.allow_calls && !sc.callees.empty() && take(calls_)) {
      os << ind << one_of(sc.callees) << "(" << int_expr(sc, 1) << ");\n";
      return;
    }
    if (vars.empty()) {
      std::string t = fresh("t");
      os << ind << "int " << t << " = " << int_expr(sc, 1) << ";\n";
      sc.frames.back().push_back(t);
      return;
    }
    os << ind << one_of(vars) << " = " << int_expr(sc, 2) << ";\n";
  }

  void block(std::ostringstream& os, Scope& sc, int depth, const std::string& ind) {
    sc.frames.emplace_back();
    stmts(os, sc, pick(1, 2), depth, ind + "  ");
    sc.frames.pop_back();
  }

 private:
  Rng& rng_;
  int counter_ = 0;
  int nondets_ = 1;
  int calls_ = 1;
};

std::string header() { return "// Copyright The fav authors\n// SPDX-License-Identifier: Apache-2.0\n\n"; }

struct LineShape {
  int features = 1;
  int functions = 2;
  std::vector<std::string> base_globals = {"g0", "g1"};
};

std::vector<std::string> callees_after(const LineShape& s, int i) {
  std::vector<std::string> out;
  for (int j = i + 1; j < s.functions; ++j) out.push_back("fn" + std::to_string(j));
  return out;
}

std::string base_module(Gen& g, const LineShape& s) {
  std::ostringstream os;
  os << header() << "feature F0;\n\n";
  os << "struct cell {\n  int v;\n};\n\n";
  os << "int g0 = 0;\nint g1 = " << g.pick(0, 2) << ";\nstruct cell *root = null;\n\n";
  for (int i = s.functions - 1; i >= 0; --i) {
    Scope sc;
    sc.frames = {{"g0", "g1", "root->v"}, {"x"}};
    sc.callees = callees_after(s, i);
    os << "int fn" << i << "(int x) {\n";
    g.budget(1, 1);
    g.stmts(os, sc, g.pick(1, 3), 2, "  ");
    os << "  return " << g.int_expr(sc, 2) << ";\n}\n\n";
  }
  Scope sc;
  sc.frames = {{"g0", "g1", "root->v"}, {}};
  sc.callees = callees_after(s, -1);
  os << "void main() {\n  root = new cell;\n";
  os << "  int a = nondet(0, 2);\n  g0 = fn0(a);\n";
  g.budget(1, 2);
  sc.frames.back().push_back("a");
  g.stmts(os, sc, g.pick(1, 3), 2, "  ");
  os << "}\n";
  return os.str();
}

std::string feature_module(Gen& g, const LineShape& s, int f) {
  std::string F = "F" + std::to_string(f);
  std::string own = "h" + std::to_string(f);
  std::ostringstream os;
  os << header() << "feature " << F << ";\n\n";
  std::vector<std::string> own_vars = {own};
  if (g.chance(0.5)) {
    std::string field = "w" + std::to_string(f);
    os << "struct cell {\n  int " << field << ";\n};\n\n";
    own_vars.push_back("root->" + field);
  }
  os << "int " << own << " = " << g.pick(0, 1) << ";\n\n";
  std::string helper;
  if (g.chance(0.4)) {
    helper = "help" + std::to_string(f);
    Scope sc;
    sc.frames = {{own}, {"x"}};
    sc.allow_calls = false;
    os << "int " << helper << "(int x) {\n";
    g.budget(1, 0);
    g.stmts(os, sc, g.pick(1, 2), 1, "  ");
    os << "  return " << g.int_expr(sc, 1) << ";\n}\n\n";
  }
  bool refined = false;
  for (int i = 0; i < s.functions; ++i) {
    if (!g.chance(0.5)) continue;
    refined = true;
    Scope sc;
    sc.frames = {{"g0", "g1", "root->v"}, {}};
    sc.frames[0].insert(sc.frames[0].end(), own_vars.begin(), own_vars.end());
    sc.frames.push_back({"x"});
    sc.callees = callees_after(s, i);
    if (!helper.empty()) sc.callees.push_back(helper);
    os << "int fn" << i << "(int x) {\n";
    g.budget(1, 1);
    if (g.chance(0.3)) {
      os << "  return original(" << g.int_expr(sc, 1) << ") + " << g.int_expr(sc, 1) << ";\n}\n\n";
      continue;
    }
    g.stmts(os, sc, g.pick(0, 2), 1, "  ");
    std::string r = g.fresh("r");
    os << "  int " << r << " = original(" << g.int_expr(sc, 1) << ");\n";
    sc.frames.back().push_back(r);
    g.stmts(os, sc, g.pick(0, 2), 1, "  ");
    os << "  return " << g.int_expr(sc, 2) << ";\n}\n\n";
  }
  if (!refined || g.chance(0.4)) {
    Scope sc;
    sc.frames = {{"g0", "g1", own}, {}};
    sc.allow_calls = false;
    os << "void main() {\n";
    g.budget(1, 1);
    g.stmts(os, sc, g.pick(0, 1), 1, "  ");
    os << "  original();\n";
    sc.frames[0] = {"g0", "g1", "root->v"};
    sc.frames[0].insert(sc.frames[0].end(), own_vars.begin(), own_vars.end());
    sc.allow_calls = true;
    sc.callees = callees_after(s, -1);
    g.stmts(os, sc, g.pick(1, 2), 1, "  ");
    os << "}\n";
  }
  return os.str();
}

std::string automaton(Gen& g, const LineShape& s, int f, int n) {
  std::string name = "A" + std::to_string(f) + "x" + std::to_string(n);
  std::vector<std::string> globals = {"g0", "g1"};
  if (f > 0) globals.push_back("h" + std::to_string(f));
  std::string fn = "fn" + std::to_string(g.pick(0, s.functions - 1));
  std::string k = std::to_string(g.pick(0, 3));
  std::ostringstream os;
  os << "automaton " << name << " {\n";
  Scope sc;
  sc.allow_calls = false;
  sc.allow_nondet = false;
  sc.allow_fault = false;
  switch (g.pick(0, 3)) {
    case 0: {
      sc.frames = {globals, {"x", "r"}};
      if (g.chance(0.5))
        os << "  after int r = " << fn << "(x:int) {\n";
      else
        os << "  after r = int " << fn << "(x:int) {\n";
      os << "    if (" << g.bool_expr(sc, 1) << ") { fail; }\n  }\n";
      break;
    }
    case 1: {
      os << "  introduction {\n    int n = 0;\n  }\n\n";
      os << "  before int " << fn << "(_:int) {\n    n = n + 1;\n  }\n\n";
      os << "  after void main() {\n    if (n > " << k << ") { fail \"count\"; }\n  }\n";
      break;
    }
    case 2: {
      sc.frames = {globals};
      os << "  after void main() {\n    if (" << g.bool_expr(sc, 1) << ") { fail; }\n  }\n";
      break;
    }
    default: {
      std::string seen = "seen" + std::to_string(f) + "x" + std::to_string(n);
      os << "  introduction {\n    shadow struct cell { int " << seen << "; };\n  }\n\n";
      os << "  before int " << fn << "(x:int) {\n    root->" << seen << " = x;\n  }\n\n";
      os << "  after int r = " << fn << "(_:int) {\n    if (root->" << seen << " + r == " << k
         << ") { fail \"shadow\"; }\n  }\n";
      break;
    }
  }
  os << "}\n";
  return os.str();
}

std::string feature_model_text(Gen& g, const LineShape& s) {
  std::ostringstream os;
  os << "# Copyright The fav authors\n# SPDX-License-Identifier: Apache-2.0\nfeatures:";
  for (int i = 0; i < s.features; ++i) os << " F" << i;
  os << "\nconstraints:\n  F0\n";
  int n = s.features > 1 ? g.pick(0, s.features - 1) : 0;
  for (int i = 0; i < n; ++i) {
    std::string a = "F" + std::to_string(g.pick(1, s.features - 1));
    std::string b = "F" + std::to_string(g.pick(0, s.features - 1));
    switch (g.pick(0, 2)) {
      case 0: os << "  " << a << " requires " << b << "\n"; break;
      case 1: os << "  " << a << " excludes " << b << "\n"; break;
      default: os << "  " << a << " || " << b << "\n"; break;
    }
  }
  return os.str();
}

}  // namespace

std::string RandomLine::dump() const {
  std::ostringstream os;
  for (const auto& [file, text] : sources) os << "==== " << file << " ====\n" << text << '\n';
  return os.str();
}

RandomLine random_line(Rng& rng, int max_features) {
  Gen g(rng);
  LineShape s;
  s.features = g.pick(1, max_features);
  s.functions = g.pick(2, 3);
  RandomLine out;
  for (;;) {
    std::string fm = feature_model_text(g, s);
    out.line.fm = parse_feature_model(fm);
    if (!out.line.fm.valid_masks().empty()) {
      out.sources["line.fm"] = fm;
      break;
    }
  }
  for (int f = 0; f < s.features; ++f) {
    std::string F = "F" + std::to_string(f);
    std::string src = f == 0 ? base_module(g, s) : feature_module(g, s, f);
    out.sources[F + ".fml"] = src;
    out.line.modules.push_back(parse_feature_module(src, F));
    if (g.chance(0.6)) {
      std::string spec = header();
      int count = g.pick(1, 2);
      for (int n = 0; n < count; ++n) spec += automaton(g, s, f, n) + "\n";
      out.sources[F + ".spec"] = spec;
      out.line.specs[F] = parse_spec_file(spec);
    }
  }
  return out;
}

Formula random_formula(Rng& rng, const std::vector<std::string>& names, int depth) {
  Gen g(rng);
  int r = depth <= 0 ? g.pick(0, 2) : g.pick(0, 6);
  if (r == 0 && g.chance(0.2)) return Formula::truth(g.chance(0.5));
  if (r <= 2) return Formula::variable(g.one_of(names));
  if (r == 3) return Formula::negate(random_formula(rng, names, depth - 1));
  std::vector<Formula> kids;
  int n = g.pick(2, 3);
  for (int i = 0; i < n; ++i) kids.push_back(random_formula(rng, names, depth - 1));
  return r <= 4 ? Formula::conj(std::move(kids)) : Formula::disj(std::move(kids));
}

FeatureModel random_feature_model(Rng& rng, int features) {
  Gen g(rng);
  std::vector<std::string> names;
  for (int i = 0; i < features; ++i) names.push_back("X" + std::to_string(i));
  if (g.chance(0.5)) return FeatureModel::from_constraint(names, random_formula(rng, names, 3));
  std::vector<Product> products;
  std::uint32_t universe = 1u << features;
  int count = g.pick(0, static_cast<int>(std::min<std::uint32_t>(universe, 12)));
  for (int i = 0; i < count; ++i) {
    std::uint32_t m = std::uniform_int_distribution<std::uint32_t>(0, universe - 1)(rng);
    Product p;
    for (int b = 0; b < features; ++b)
      if (m >> b & 1u) p.push_back(names[static_cast<std::size_t>(b)]);
    products.push_back(std::move(p));
  }
  return FeatureModel::from_products(names, products);
}

}  // namespace fav::testsupport
