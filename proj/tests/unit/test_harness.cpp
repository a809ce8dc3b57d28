// Copyright The fav authors
// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "fav/harness.hpp"
#include "support/programs.hpp"

using namespace fav;
namespace fs = std::filesystem;

namespace {

// Base price x in 1..3; Tax and Discount together push it below -1.
const std::map<std::string, std::string> kFiles = {
    {"price.fm", "features: Base Tax Discount\nconstraints:\n  Base\n"},
    {"Base.fml", "feature Base;\nint total = 0;\nint price(int x) { return x; }\n"
                 "void main() { total = price(nondet(1, 3)); }\n"},
    {"Tax.fml", "feature Tax;\nint price(int x) { return original(x) - 3; }\n"},
    {"Discount.fml", "feature Discount;\nint price(int x) { return original(x) - 1; }\n"},
    {"Discount.spec", "automaton PriceSpec {\n  after int r = price(x:int) {\n    if (r < -1) { fail \"low\"; }\n  }\n}\n"},
};

const char* kManifest = R"(# sample line
features price.fm
module Base Base.fml
module Tax Tax.fml
module Discount Discount.fml
spec Discount Discount.spec
expect 5 Discount Tax Discount PriceSpec
)";

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    dir_ = fs::temp_directory_path() / ("fav-harness-" + std::to_string(rd()));
    fs::create_directories(dir_);
    for (const auto& [name, text] : kFiles) write(name, text);
  }
  ~TempDir() { fs::remove_all(dir_); }
  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name) << text;
    return dir_ / name;
  }
  const fs::path& path() const { return dir_; }

 private:
  fs::path dir_;
};

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

}  // namespace

TEST_CASE("manifest loading") {
  TempDir d;
  ProductLine line = load_line(d.write("line.manifest", kManifest));
  CHECK(line.fm.features() == std::vector<std::string>{"Base", "Tax", "Discount"});
  CHECK(line.fm.valid_masks().size() == 4);
  REQUIRE(line.modules.size() == 3);
  CHECK(line.modules[2].name == "Discount");
  CHECK(line.specs.at("Discount").size() == 1);
  REQUIRE(line.expectations.size() == 1);
  CHECK(line.expectations[0] == InteractionExpectation{5, "Discount", "Tax", "Discount", "PriceSpec"});
}

TEST_CASE("manifest errors") {
  TempDir d;
  CHECK_THROWS_AS(load_line(d.write("a.manifest", "module Base Base.fml\n")), FavError);
  CHECK_THROWS_AS(load_line(d.write("b.manifest", "features price.fm\nfrobnicate x\n")), FavError);
  CHECK_THROWS_AS(load_line(d.write("c.manifest", "features price.fm\nmodule Ghost Base.fml\n")), FavError);
  CHECK_THROWS_AS(load_line(d.write("d.manifest", "features price.fm\nmodule Base\n")), FavError);
  CHECK_THROWS_AS(load_line(d.write("e.manifest", "features missing.fm\n")), FavError);
  CHECK_THROWS_AS(load_line(d.write("f.manifest", "features price.fm\nexpect x A B A S\n")), FavError);
  CHECK_THROWS_AS(load_line(d.write("g.manifest", "features price.fm\nspec Ghost Discount.spec\n")), FavError);
  CHECK_THROWS_AS(load_line(d.path() / "absent.manifest"), FavError);
}

TEST_CASE("parallel and serial brute force agree") {
  TempDir d;
  ProductLine line = load_line(d.write("line.manifest", kManifest));
  auto par = verify_brute_force(line);
  auto ser = verify_brute_force_serial(line);
  REQUIRE(par.size() == ser.size());
  CHECK(par.size() == 2);
  for (std::size_t i = 0; i < par.size(); ++i) {
    CHECK(par[i].product == ser[i].product);
    CHECK(par[i].automaton == ser[i].automaton);
    CHECK(par[i].verdict.kind == ser[i].verdict.kind);
    CHECK(par[i].verdict.label == ser[i].verdict.label);
    CHECK(par[i].verdict.path == ser[i].verdict.path);
    CHECK(par[i].metrics.states_explored == ser[i].metrics.states_explored);
  }
  int violating = 0;
  for (const auto& t : par) {
    if (t.verdict.kind != VerdictKind::Violation) continue;
    ++violating;
    CHECK(t.product == Product{"Base", "Tax", "Discount"});
    CHECK(t.verdict.label == "PriceSpec@after price: low");
  }
  CHECK(violating == 1);
}

TEST_CASE("simulator finds the interaction") {
  TempDir d;
  ProductLine line = load_line(d.write("line.manifest", kManifest));
  auto sim = verify_simulator(line);
  REQUIRE(sim.size() == 1);
  CHECK(sim[0].feature == "Discount");
  CHECK(sim[0].verdict.kind == VerdictKind::Violation);
  CHECK(sim[0].selection == Product{"Base", "Tax", "Discount"});
}

TEST_CASE("audit and report") {
  TempDir d;
  ProductLine line = load_line(d.write("line.manifest", kManifest));
  auto brute = verify_brute_force(line);
  auto sim = verify_simulator(line);
  InteractionAudit audit = audit_interactions(line, brute, sim);
  CHECK(audit.ok());
  CHECK(audit.unexpected.empty());
  REQUIRE(audit.findings.size() == 1);
  const InteractionFinding& f = audit.findings[0];
  CHECK(f.candidates == 2);
  CHECK(f.violating == 1);
  CHECK(f.brute_detected);
  CHECK(f.simulator_detected);
  CHECK(f.attributed);

  ComparisonReport r = build_report(line, brute, sim, {});
  REQUIRE(r.rows.size() == 1);
  const InteractionRow& row = r.rows[0];
  CHECK(row.expected_id == 5);
  CHECK(row.candidates == 2);
  CHECK(row.violating == 1);
  REQUIRE(row.detection);
  CHECK(row.detection->b == 1);
  CHECK(row.detection->n == 2);
  CHECK(row.simulator_cost > 0);

  std::ostringstream a, det, single;
  write_absence_dsv(r, a);
  write_detection_dsv(r, det);
  write_single_dsv(r, single);
  CHECK(first_line(a.str()) == "feature\tautomaton\tcandidates\tbrute_total\tsimulator");
  CHECK(first_line(det.str()) ==
        "interaction\tfeature\tautomaton\tb\tn\tmin\tq1\tmedian\tq3\tmax\tmean\tsimulator");
  CHECK(first_line(single.str()) == "interaction\tb_over_n\tbrute_median\tsimulator");
  CHECK(det.str().find("\n5\tDiscount\tPriceSpec\t1\t2\t") != std::string::npos);
}

TEST_CASE("a missing expectation is reported as unexpected") {
  TempDir d;
  std::string manifest = kManifest;
  manifest.erase(manifest.find("expect"));
  ProductLine line = load_line(d.write("bare.manifest", manifest));
  InteractionAudit audit = audit_interactions(line, verify_brute_force(line), verify_simulator(line));
  CHECK_FALSE(audit.ok());
  CHECK(audit.unexpected == std::vector<std::string>{"Discount/PriceSpec"});
}

TEST_CASE("forwarding fragment is interaction free") {
  ProductLine line = load_line(testsupport::source_path("tests/data/forwarding/fragment.manifest"));
  InteractionAudit audit = audit_interactions(line, verify_brute_force(line), verify_simulator(line));
  CHECK(audit.ok());
  CHECK(audit.findings.empty());
  CHECK(audit.unexpected.empty());
}

TEST_CASE("selection products") {
  FeatureModel fm = FeatureModel::from_constraint({"A", "B"}, parse_formula("A"));
  std::map<std::string, std::string> var = {{"A", "fa"}, {"B", "fb"}};
  CHECK(selection_product({"fb", "fa"}, var, fm) == Product{"A", "B"});
  CHECK_THROWS_AS(selection_product({"fz"}, var, fm), FavError);
}
