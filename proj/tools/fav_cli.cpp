// Copyright The fav authors
// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fav/casestudy.hpp"
#include "fav/checker.hpp"
#include "fav/composer.hpp"
#include "fav/harness.hpp"
#include "fav/parser.hpp"
#include "fav/printer.hpp"
#include "fav/typecheck.hpp"
#include "fav/varenc.hpp"

namespace {

using namespace fav;
using nlohmann::json;

constexpr int kSafe = 0;
constexpr int kViolation = 1;
constexpr int kInputError = 2;
constexpr int kBound = 3;

struct Config {
  std::string input;
  std::string product;
  std::string strategy = "both";
  std::string format = "text";
  std::string cost = "states";
  std::string out_dir;
  bool weave = false;
  std::size_t exact_limit = 10;
  std::size_t classes = 5;
  CheckOptions check;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FavError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

/// Exit code of a verdict set: violations first, then faults, then bounds.
int exit_code(const std::vector<VerdictKind>& kinds) {
  bool fault = false, bound = false;
  for (auto k : kinds) {
    if (k == VerdictKind::Violation) return kViolation;
    fault |= k == VerdictKind::RuntimeFault;
    bound |= k == VerdictKind::BoundExceeded;
  }
  if (fault) return kInputError;
  return bound ? kBound : kSafe;
}

json verdict_json(const Verdict& v) {
  CheckResult r{v, {}};
  json j = json::parse(to_json(r));
  j.erase("metrics");
  return j;
}

void print_verdict(const std::string& head, const Verdict& v) {
  std::cout << head << ": " << to_string(v.kind);
  if (!v.label.empty()) std::cout << " [" << v.label << "]";
  if (!v.detail.empty()) std::cout << " (" << v.detail << ")";
  std::cout << '\n';
  if (v.kind == VerdictKind::Violation || v.kind == VerdictKind::RuntimeFault) {
    if (!v.path.selection.empty()) {
      std::cout << "  selection:";
      for (const auto& s : v.path.selection) std::cout << ' ' << s;
      std::cout << '\n';
    }
    std::istringstream lines(render_error_path(v.path));
    for (std::string l; std::getline(lines, l);) std::cout << "  " << l << '\n';
  }
}

int cmd_parse(const Config& c) {
  std::string src = read_file(c.input);
  if (ends_with(c.input, ".spec")) {
    for (const auto& a : parse_spec_file(src)) std::cout << pretty_print(a) << '\n';
  } else if (ends_with(c.input, ".fml")) {
    std::cout << pretty_print(parse_feature_module(src));
  } else {
    std::cout << pretty_print(parse_program(src));
  }
  return kSafe;
}

int cmd_typecheck(const Config& c) {
  ProductLine line = load_line(c.input);
  TypeReport rep = typecheck_product_line(line.modules, line.fm);
  if (c.format == "json") {
    json j = json::array();
    for (const auto& i : rep.issues) j.push_back({{"product", i.product}, {"message", i.message}});
    std::cout << json{{"ok", rep.ok()}, {"issues", j}}.dump(2) << '\n';
  } else {
    for (const auto& i : rep.issues) std::cout << to_string(i.product) << ": " << i.message << '\n';
    if (rep.ok()) std::cout << "type-safe: " << enumerate_products(line.fm).size() << " products\n";
  }
  return rep.ok() ? kSafe : kInputError;
}

int cmd_compose(const Config& c) {
  ProductLine line = load_line(c.input);
  Product p = parse_product(line.fm, c.product);
  Program prog = compose(line.modules, line.fm, p);
  if (c.weave) prog = weave(prog, line.specs, p);
  if (c.format == "json") {
    std::cout << json{{"program", pretty_print(prog)}, {"provenance", json::parse(provenance_json(prog))}}.dump(2)
              << '\n';
  } else {
    std::cout << pretty_print(prog);
  }
  return kSafe;
}

int cmd_encode(const Config& c) {
  ProductLine line = load_line(c.input);
  Simulator sim = var_enc(line.modules, line.fm);
  if (c.weave) sim = weave_simulator(sim, line.specs);
  if (c.format == "json") {
    std::cout << json{{"program", pretty_print(sim.program)},
                      {"variables", sim.variable_of},
                      {"feature_model", sim.feature_model_function}}
                     .dump(2)
              << '\n';
  } else {
    std::cout << pretty_print(sim.program);
  }
  return kSafe;
}

int cmd_check(const Config& c) {
  std::vector<VerdictKind> kinds;
  json out = json::array();
  auto report = [&](const std::string& head, const CheckResult& r) {
    kinds.push_back(r.verdict.kind);
    if (c.format == "json") {
      json j = json::parse(to_json(r));
      j["task"] = head;
      out.push_back(std::move(j));
    } else {
      print_verdict(head, r.verdict);
    }
  };
  if (c.product.empty()) {
    Program prog = parse_program(read_file(c.input));
    report(c.input, check(prog, c.check));
  } else {
    ProductLine line = load_line(c.input);
    Product p = parse_product(line.fm, c.product);
    Program composed = compose(line.modules, line.fm, p);
    auto automata = automata_for(line.specs, p);
    if (automata.empty()) report(to_string(p), check(composed, c.check));
    for (const auto& a : automata)
      report(a.feature + "/" + a.automaton->name, check(weave_automata(composed, {a}), c.check));
  }
  if (c.format == "json") std::cout << out.dump(2) << '\n';
  return exit_code(kinds);
}

std::string pair_text(const InteractionExpectation& e) { return e.feature_a + ", " + e.feature_b; }

int cmd_verify(const Config& c) {
  ProductLine line = load_line(c.input);
  bool brute = c.strategy == "brute" || c.strategy == "both";
  bool simulate = c.strategy == "simulator" || c.strategy == "both";
  std::vector<ProductTask> bt;
  std::vector<SimulatorTask> st;
  if (brute) bt = verify_brute_force(line, c.check);
  if (simulate) st = verify_simulator(line, c.check);

  std::vector<VerdictKind> kinds;
  for (const auto& t : bt) kinds.push_back(t.verdict.kind);
  for (const auto& t : st) kinds.push_back(t.verdict.kind);
  InteractionAudit audit = audit_interactions(line, bt, st);

  if (c.format == "json") {
    json j;
    j["brute_force"] = json::array();
    for (const auto& t : bt)
      j["brute_force"].push_back({{"product", t.product},
                                  {"feature", t.feature},
                                  {"automaton", t.automaton},
                                  {"verdict", verdict_json(t.verdict)},
                                  {"states_explored", t.metrics.states_explored}});
    j["simulator"] = json::array();
    for (const auto& t : st)
      j["simulator"].push_back({{"feature", t.feature},
                                {"automaton", t.automaton},
                                {"selection", t.selection},
                                {"verdict", verdict_json(t.verdict)},
                                {"states_explored", t.metrics.states_explored}});
    j["interactions"] = json::array();
    for (const auto& f : audit.findings)
      j["interactions"].push_back({{"id", f.expected.id},
                                   {"features", {f.expected.feature_a, f.expected.feature_b}},
                                   {"owner", f.expected.owner},
                                   {"automaton", f.expected.automaton},
                                   {"violating", f.violating},
                                   {"candidates", f.candidates},
                                   {"brute_force", f.brute_detected},
                                   {"simulator", f.simulator_detected},
                                   {"attributed", f.attributed}});
    j["unexpected"] = audit.unexpected;
    std::cout << j.dump(2) << '\n';
    return exit_code(kinds);
  }

  std::map<std::string, std::pair<std::size_t, std::size_t>> tally;
  std::map<std::string, const ProductTask*> first_bad;
  for (const auto& t : bt) {
    auto key = t.feature + "/" + t.automaton;
    auto& [bad, all] = tally[key];
    ++all;
    if (t.verdict.kind != VerdictKind::Safe) {
      ++bad;
      if (!first_bad.count(key)) first_bad[key] = &t;
    }
  }
  if (brute) {
    std::cout << "== brute force: " << enumerate_products(line.fm).size() << " products, " << bt.size()
              << " checks\n";
    for (const auto& [key, n] : tally) {
      std::cout << key << ": " << n.first << "/" << n.second << " products not safe\n";
      if (auto it = first_bad.find(key); it != first_bad.end())
        print_verdict("  first in " + to_string(it->second->product), it->second->verdict);
    }
  }
  if (simulate) {
    std::cout << "== simulator\n";
    for (const auto& t : st) {
      print_verdict(t.feature + "/" + t.automaton, t.verdict);
      if (!t.selection.empty()) std::cout << "  product: " << to_string(t.selection) << '\n';
    }
  }
  if (!line.expectations.empty()) {
    std::cout << "== interactions\n";
    for (const auto& f : audit.findings) {
      std::cout << "interaction " << f.expected.id << " (" << pair_text(f.expected) << "): ";
      bool detected = (!brute || f.brute_detected) && (!simulate || f.simulator_detected);
      std::cout << (detected ? "detected" : "NOT detected") << " by " << f.expected.owner << "/" << f.expected.automaton;
      if (brute) std::cout << " in " << f.violating << "/" << f.candidates << " products";
      if (detected && !f.attributed) std::cout << ", attribution mismatch";
      std::cout << '\n';
    }
    for (const auto& u : audit.unexpected) std::cout << "unexpected violation: " << u << '\n';
  }
  return exit_code(kinds);
}

CostKind cost_kind(const std::string& s) { return s == "wallclock" ? CostKind::Wallclock : CostKind::States; }

int cmd_analyze(const Config& c) {
  ProductLine line = load_line(c.input);
  CompareOptions o;
  o.check = c.check;
  o.cost = cost_kind(c.cost);
  o.exact_limit = c.exact_limit;
  o.class_count = c.classes;
  ComparisonReport rep = compare_strategies(line, o);
  if (!c.out_dir.empty()) {
    std::filesystem::create_directories(c.out_dir);
    std::ofstream a(std::filesystem::path(c.out_dir) / "absence.tsv");
    write_absence_dsv(rep, a);
    std::ofstream d(std::filesystem::path(c.out_dir) / "detection.tsv");
    write_detection_dsv(rep, d);
    std::ofstream s(std::filesystem::path(c.out_dir) / "single.tsv");
    write_single_dsv(rep, s);
  }
  if (c.format == "json") {
    json rows = json::array();
    for (const auto& r : rep.rows) {
      json j{{"feature", r.feature},
             {"automaton", r.automaton},
             {"simulator_cost", r.simulator_cost},
             {"simulator_verdict", to_string(r.simulator_verdict)},
             {"candidates", r.candidates},
             {"violating", r.violating},
             {"brute_total", r.brute_total},
             {"brute_generation_seconds", r.brute_generation_seconds},
             {"simulator_generation_seconds", r.simulator_generation_seconds}};
      if (r.expected_id) j["interaction"] = *r.expected_id;
      if (r.detection) {
        const auto& d = *r.detection;
        j["detection"] = {{"min", d.min}, {"q1", d.q1},     {"median", d.median},
                          {"q3", d.q3},   {"max", d.max},   {"mean", d.mean},
                          {"b", d.b},     {"n", d.n},       {"hit_probability", d.hit_probability},
                          {"exact", d.exact}};
      }
      rows.push_back(std::move(j));
    }
    std::cout << json{{"cost", c.cost}, {"rows", rows}}.dump(2) << '\n';
  } else {
    std::cout << "== absence proofs (cost: " << c.cost << ")\n";
    write_absence_dsv(rep, std::cout);
    std::cout << "== detection\n";
    write_detection_dsv(rep, std::cout);
  }
  return kSafe;
}

int cmd_casestudy(Config c) {
  if (c.input.empty()) c.input = bundled_email_manifest().string();
  ProductLine line = load_line(c.input);
  auto bt = verify_brute_force(line, c.check);
  auto st = verify_simulator(line, c.check);
  InteractionAudit audit = audit_interactions(line, bt, st);
  std::size_t products = enumerate_products(line.fm).size();
  std::cout << "products: " << products << '\n';
  for (const auto& f : audit.findings) {
    bool pass = f.brute_detected && f.simulator_detected && f.attributed;
    std::cout << (pass ? "PASS" : "FAIL") << " interaction " << f.expected.id << " (" << pair_text(f.expected)
              << "): " << f.violating << "/" << f.candidates << " products\n";
  }
  for (const auto& u : audit.unexpected) std::cout << "FAIL unexpected violation " << u << '\n';
  if (!c.out_dir.empty()) {
    CompareOptions o;
    o.check = c.check;
    o.cost = cost_kind(c.cost);
    o.exact_limit = c.exact_limit;
    o.class_count = c.classes;
    ComparisonReport rep = build_report(line, bt, st, o);
    std::filesystem::create_directories(c.out_dir);
    std::ofstream a(std::filesystem::path(c.out_dir) / "absence.tsv");
    write_absence_dsv(rep, a);
    std::ofstream d(std::filesystem::path(c.out_dir) / "detection.tsv");
    write_detection_dsv(rep, d);
    std::ofstream s(std::filesystem::path(c.out_dir) / "single.tsv");
    write_single_dsv(rep, s);
  }
  return audit.ok() ? kSafe : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fav: feature-aware verification of product lines"};
  app.require_subcommand(1);
  Config c;

  auto add_bounds = [&](CLI::App* s) {
    s->add_option("--unroll-bound", c.check.unroll_bound, "Loop unrolling bound")->check(CLI::PositiveNumber);
    s->add_option("--call-depth", c.check.call_depth, "Maximum call depth")->check(CLI::PositiveNumber);
    s->add_option("--dedup", c.check.dedup, "Merge visited states (true/false)");
  };
  auto add_format = [&](CLI::App* s) {
    s->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  };
  auto add_analysis = [&](CLI::App* s) {
    s->add_option("--cost", c.cost, "Runtime measure")->check(CLI::IsMember({"states", "wallclock"}));
    s->add_option("--exact-limit", c.exact_limit, "Largest candidate count analysed exactly");
    s->add_option("--classes", c.classes, "Runtime classes beyond the exact limit")->check(CLI::PositiveNumber);
    s->add_option("--out-dir", c.out_dir, "Directory for plot data (tab-separated)");
  };

  auto* parse = app.add_subcommand("parse", "Parse and pretty-print a .fml, .spec, or program file");
  parse->add_option("file", c.input)->required();

  auto* tc = app.add_subcommand("typecheck", "Type-check every product of a product line");
  tc->add_option("manifest", c.input)->required();
  add_format(tc);

  auto* comp = app.add_subcommand("compose", "Compose one product");
  comp->add_option("manifest", c.input)->required();
  comp->add_option("--product", c.product, "Comma-separated features")->required();
  comp->add_flag("--weave", c.weave, "Weave the specifications of the product's features");
  add_format(comp);

  auto* enc = app.add_subcommand("encode", "Build the product simulator");
  enc->add_option("manifest", c.input)->required();
  enc->add_flag("--weave", c.weave, "Weave all specifications");
  add_format(enc);

  auto* chk = app.add_subcommand("check", "Check a program file, or one product of a manifest");
  chk->add_option("input", c.input)->required();
  chk->add_option("--product", c.product, "Comma-separated features (input is a manifest)");
  add_bounds(chk);
  add_format(chk);

  auto* ver = app.add_subcommand("verify", "Verify a product line");
  ver->add_option("manifest", c.input)->required();
  ver->add_option("--strategy", c.strategy, "brute, simulator, or both")
      ->check(CLI::IsMember({"brute", "simulator", "both"}));
  add_bounds(ver);
  add_format(ver);

  auto* ana = app.add_subcommand("analyze", "Compare both strategies per automaton");
  ana->add_option("manifest", c.input)->required();
  add_bounds(ana);
  add_format(ana);
  add_analysis(ana);

  auto* cs = app.add_subcommand("casestudy", "Run the bundled e-mail product line regression");
  cs->add_option("manifest", c.input, "Alternative manifest");
  add_bounds(cs);
  add_analysis(cs);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kInputError;
  }

  try {
    if (*parse) return cmd_parse(c);
    if (*tc) return cmd_typecheck(c);
    if (*comp) return cmd_compose(c);
    if (*enc) return cmd_encode(c);
    if (*chk) return cmd_check(c);
    if (*ver) return cmd_verify(c);
    if (*ana) return cmd_analyze(c);
    if (*cs) return cmd_casestudy(c);
  } catch (const SyntaxError& e) {
    std::cerr << "error: " << c.input << ":" << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}
