// Copyright The fav authors
// SPDX-License-Identifier: Apache-2.0

#include "fav/harness.hpp"

#include <algorithm>
#include <chrono>
#include <exception>
#include <fstream>
#include <map>
#include <set>
#include <ostream>
#include <sstream>

#include "fav/composer.hpp"
#include "fav/parser.hpp"
#include "fav/varenc.hpp"

namespace fav {

namespace {

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw FavError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool bad(VerdictKind k) { return k == VerdictKind::Violation || k == VerdictKind::RuntimeFault; }

bool contains(const Product& p, const std::string& f) { return std::find(p.begin(), p.end(), f) != p.end(); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct TaskSpec {
  std::size_t product;
  std::string feature;
  const Automaton* automaton;
};

struct BrutePlan {
  std::vector<Product> products;
  std::vector<TaskSpec> tasks;
};

BrutePlan plan_brute_force(const ProductLine& line) {
  BrutePlan plan;
  plan.products = enumerate_products(line.fm);
  for (std::size_t i = 0; i < plan.products.size(); ++i) {
    for (const auto& f : plan.products[i]) {
      auto it = line.specs.find(f);
      if (it == line.specs.end()) continue;
      for (const auto& a : it->second) plan.tasks.push_back({i, f, &a});
    }
  }
  return plan;
}

ProductTask run_task(const BrutePlan& plan, const std::vector<Program>& composed,
                     const TaskSpec& t, const CheckOptions& opts) {
  ProductTask out;
  out.product = plan.products[t.product];
  out.feature = t.feature;
  out.automaton = t.automaton->name;
  try {
    auto t0 = std::chrono::steady_clock::now();
    Program woven = weave_automata(composed[t.product], {OwnedAutomaton{t.feature, t.automaton}});
    out.generation_seconds = seconds_since(t0);
    CheckResult r = check(woven, opts);
    out.verdict = std::move(r.verdict);
    out.metrics = r.metrics;
  } catch (const std::exception& e) {
    throw FavError("product " + to_string(out.product) + ", automaton " + out.automaton + ": " + e.what());
  }
  return out;
}

Program compose_attributed(const ProductLine& line, const Product& p) {
  try {
    return compose(line.modules, line.fm, p);
  } catch (const std::exception& e) {
    throw FavError("product " + to_string(p) + ": " + e.what());
  }
}

}  // namespace

ProductLine load_line(const std::filesystem::path& manifest) {
  ProductLine line;
  const auto dir = manifest.parent_path();
  std::istringstream in(read_file(manifest));
  std::string raw;
  int lineno = 0;
  bool have_fm = false;
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
    std::istringstream ls(raw);
    std::vector<std::string> w;
    for (std::string tok; ls >> tok;) w.push_back(tok);
    if (w.empty()) continue;
    auto where = [&] { return manifest.string() + ":" + std::to_string(lineno) + ": "; };
    auto arity = [&](std::size_t n) {
      if (w.size() != n) throw FavError(where() + "'" + w[0] + "' expects " + std::to_string(n - 1) + " arguments");
    };
    try {
      if (w[0] == "features" || w[0] == "features:") {
        arity(2);
        line.fm = parse_feature_model(read_file(dir / w[1]));
        have_fm = true;
      } else if (w[0] == "module") {
        arity(3);
        FeatureModule m = parse_feature_module(read_file(dir / w[2]), w[1]);
        m.name = w[1];
        m.order_index = static_cast<int>(line.modules.size());
        line.modules.push_back(std::move(m));
      } else if (w[0] == "spec") {
        arity(3);
        auto automata = parse_spec_file(read_file(dir / w[2]));
        auto& dst = line.specs[w[1]];
        for (auto& a : automata) dst.push_back(std::move(a));
      } else if (w[0] == "expect") {
        arity(6);
        line.expectations.push_back({std::stoi(w[1]), w[2], w[3], w[4], w[5]});
      } else {
        throw FavError(where() + "unknown directive '" + w[0] + "'");
      }
    } catch (const SyntaxError& e) {
      throw FavError(where() + (dir / w.back()).string() + ":" + e.what());
    } catch (const std::invalid_argument&) {
      throw FavError(where() + "bad number");
    }
  }
  if (!have_fm) throw FavError(manifest.string() + ": missing 'features' line");
  for (const auto& m : line.modules)
    if (!line.fm.index_of(m.name)) throw FavError("module '" + m.name + "' is not a feature of the model");
  for (const auto& [f, _] : line.specs)
    if (!line.fm.index_of(f)) throw FavError("spec for unknown feature '" + f + "'");
  return line;
}

std::vector<ProductTask> verify_brute_force(const ProductLine& line, const CheckOptions& opts) {
  BrutePlan plan = plan_brute_force(line);
  const auto np = static_cast<std::ptrdiff_t>(plan.products.size());
  const auto nt = static_cast<std::ptrdiff_t>(plan.tasks.size());
  std::vector<Program> composed(plan.products.size());
  std::vector<std::exception_ptr> errors(plan.products.size() + plan.tasks.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < np; ++i) {
    try {
      composed[static_cast<std::size_t>(i)] = compose_attributed(line, plan.products[static_cast<std::size_t>(i)]);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<ProductTask> out(plan.tasks.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < nt; ++i) {
    auto u = static_cast<std::size_t>(i);
    try {
      out[u] = run_task(plan, composed, plan.tasks[u], opts);
    } catch (...) {
      errors[plan.products.size() + u] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

std::vector<ProductTask> verify_brute_force_serial(const ProductLine& line, const CheckOptions& opts) {
  BrutePlan plan = plan_brute_force(line);
  std::vector<Program> composed;
  for (const auto& p : plan.products) composed.push_back(compose_attributed(line, p));
  std::vector<ProductTask> out;
  for (const auto& t : plan.tasks) out.push_back(run_task(plan, composed, t, opts));
  return out;
}

Product selection_product(const std::vector<std::string>& variables, const std::map<std::string, std::string>& variable_of,
                          const FeatureModel& fm) {
  std::map<std::string, std::string> feature_of;
  for (const auto& [f, v] : variable_of) feature_of[v] = f;
  std::uint32_t mask = 0;
  for (const auto& v : variables) {
    auto it = feature_of.find(v);
    if (it == feature_of.end()) throw FavError("unknown feature variable '" + v + "'");
    mask |= std::uint32_t{1} << *fm.index_of(it->second);
  }
  return fm.product_of(mask);
}

std::vector<SimulatorTask> verify_simulator(const ProductLine& line, const CheckOptions& opts) {
  auto t0 = std::chrono::steady_clock::now();
  Simulator sim = var_enc(line.modules, line.fm);
  double encode_seconds = seconds_since(t0);
  std::vector<SimulatorTask> out;
  for (const auto& [feature, automata] : line.specs) {
    for (const auto& a : automata) {
      SimulatorTask t;
      t.feature = feature;
      t.automaton = a.name;
      auto t1 = std::chrono::steady_clock::now();
      Simulator woven = weave_simulator(sim, std::vector<OwnedAutomaton>{{feature, &a}});
      t.generation_seconds = encode_seconds + seconds_since(t1);
      CheckOptions o = opts;
      const auto& vars = woven.program.feature_variables;
      const auto& var = woven.variable_of.at(feature);
      for (std::size_t i = 0; i < vars.size(); ++i)
        if (vars[i] == var) o.required_features = std::uint32_t{1} << i;
      CheckResult r = check(woven.program, o);
      t.verdict = std::move(r.verdict);
      t.metrics = r.metrics;
      if (bad(t.verdict.kind))
        t.selection = selection_product(t.verdict.path.selection, woven.variable_of, line.fm);
      out.push_back(std::move(t));
    }
  }
  return out;
}

bool InteractionAudit::ok() const {
  if (!unexpected.empty()) return false;
  for (const auto& f : findings)
    if (!f.brute_detected || !f.simulator_detected || !f.attributed) return false;
  return true;
}

InteractionAudit audit_interactions(const ProductLine& line, const std::vector<ProductTask>& brute,
                                    const std::vector<SimulatorTask>& sim) {
  InteractionAudit audit;
  auto expected = [&](const std::string& feature, const std::string& automaton) {
    for (const auto& e : line.expectations)
      if (e.owner == feature && e.automaton == automaton) return true;
    return false;
  };
  for (const auto& e : line.expectations) {
    InteractionFinding f;
    f.expected = e;
    f.attributed = true;
    for (const auto& t : brute) {
      if (t.feature != e.owner || t.automaton != e.automaton) continue;
      ++f.candidates;
      if (!bad(t.verdict.kind)) continue;
      ++f.violating;
      if (!contains(t.product, e.feature_a) || !contains(t.product, e.feature_b)) f.attributed = false;
    }
    f.brute_detected = f.violating > 0;
    for (const auto& s : sim) {
      if (s.feature != e.owner || s.automaton != e.automaton || !bad(s.verdict.kind)) continue;
      f.simulator_detected = true;
      if (!contains(s.selection, e.feature_a) || !contains(s.selection, e.feature_b)) f.attributed = false;
    }
    if (!f.brute_detected && !f.simulator_detected) f.attributed = false;
    audit.findings.push_back(std::move(f));
  }
  std::set<std::string> seen;
  auto note = [&](const std::string& feature, const std::string& automaton) {
    if (!expected(feature, automaton) && seen.insert(feature + "/" + automaton).second)
      audit.unexpected.push_back(feature + "/" + automaton);
  };
  for (const auto& t : brute)
    if (bad(t.verdict.kind)) note(t.feature, t.automaton);
  for (const auto& s : sim)
    if (bad(s.verdict.kind)) note(s.feature, s.automaton);
  return audit;
}

double cost_of(const CheckMetrics& m, CostKind k) {
  return k == CostKind::States ? static_cast<double>(m.states_explored) : m.wall_seconds;
}

ComparisonReport build_report(const ProductLine& line, const std::vector<ProductTask>& brute,
                              const std::vector<SimulatorTask>& sim, const CompareOptions& opts) {
  ComparisonReport rep;
  rep.cost = opts.cost;
  for (const auto& s : sim) {
    InteractionRow row;
    row.feature = s.feature;
    row.automaton = s.automaton;
    for (const auto& e : line.expectations)
      if (e.automaton == s.automaton && e.owner == s.feature) row.expected_id = e.id;
    row.simulator_cost = cost_of(s.metrics, opts.cost);
    row.simulator_verdict = s.verdict.kind;
    row.simulator_selection = s.selection;
    row.simulator_generation_seconds = s.generation_seconds;
    RuntimeTable rt;
    for (const auto& t : brute) {
      if (t.feature != s.feature || t.automaton != s.automaton) continue;
      bool violating = bad(t.verdict.kind);
      double c = cost_of(t.metrics, opts.cost);
      rt.push_back({t.product, violating, c});
      row.brute_total += c;
      row.brute_generation_seconds += t.generation_seconds;
      if (violating) row.violating_products.push_back(t.product);
    }
    row.candidates = rt.size();
    row.violating = row.violating_products.size();
    if (row.violating > 0) row.detection = analyze_orderings(rt, opts.exact_limit, opts.class_count);
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

ComparisonReport compare_strategies(const ProductLine& line, const CompareOptions& opts) {
  auto brute = verify_brute_force(line, opts.check);
  auto sim = verify_simulator(line, opts.check);
  return build_report(line, brute, sim, opts);
}

namespace {

std::string row_name(const InteractionRow& r) {
  return r.expected_id ? std::to_string(*r.expected_id) : r.feature + "/" + r.automaton;
}

}  // namespace

void write_absence_dsv(const ComparisonReport& r, std::ostream& os) {
  os << "feature\tautomaton\tcandidates\tbrute_total\tsimulator\n";
  for (const auto& row : r.rows)
    if (row.violating == 0)
      os << row.feature << '\t' << row.automaton << '\t' << row.candidates << '\t' << row.brute_total << '\t'
         << row.simulator_cost << '\n';
}

void write_detection_dsv(const ComparisonReport& r, std::ostream& os) {
  os << "interaction\tfeature\tautomaton\tb\tn\tmin\tq1\tmedian\tq3\tmax\tmean\tsimulator\n";
  for (const auto& row : r.rows) {
    if (!row.detection) continue;
    const auto& d = *row.detection;
    os << row_name(row) << '\t' << row.feature << '\t' << row.automaton << '\t' << d.b << '\t' << d.n << '\t' << d.min
       << '\t' << d.q1 << '\t' << d.median << '\t' << d.q3 << '\t' << d.max << '\t' << d.mean << '\t'
       << row.simulator_cost << '\n';
  }
}

void write_single_dsv(const ComparisonReport& r, std::ostream& os) {
  os << "interaction\tb_over_n\tbrute_median\tsimulator\n";
  for (const auto& row : r.rows) {
    if (!row.detection) continue;
    os << row_name(row) << '\t' << row.detection->hit_probability << '\t' << row.detection->median << '\t'
       << row.simulator_cost << '\n';
  }
}

}  // namespace fav
