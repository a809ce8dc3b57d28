// Copyright The fav authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <map>

#include "doctest.h"
#include "fav/checker.hpp"
#include "fav/composer.hpp"
#include "fav/harness.hpp"
#include "fav/varenc.hpp"
#include "support/programs.hpp"
#include "support/random_lines.hpp"

using namespace fav;
using namespace fav::testsupport;

TEST_CASE("simulator of the forwarding fragment") {
  ProductLine frag = load_line(source_path("tests/data/forwarding/fragment.manifest"));
  Simulator s = var_enc(frag.modules, frag.fm);
  CHECK(s.program.feature_variables == std::vector<std::string>{"EMailClient", "Forward"});
  CHECK(s.variable_of.at("Forward") == "Forward");
  CHECK(s.program.find_function("incoming$Forward"));
  CHECK(s.program.find_function("incoming$EMailClient"));
  CHECK(s.program.find_function(s.feature_model_function));
  CHECK(s.program.find_global("Forward"));
  const FunctionDecl* g = s.program.find_function("incoming");
  REQUIRE(g);
  REQUIRE(g->body.size() == 1);
  CHECK(g->body[0].kind == StmtKind::If);
}

TEST_CASE("selecting a product fixes the feature variables") {
  ProductLine frag = load_line(source_path("tests/data/forwarding/fragment.manifest"));
  Simulator s = var_enc(frag.modules, frag.fm);
  Program p = select(s, {"EMailClient"});
  CHECK(p.feature_variables.empty());
  const GlobalDecl* fwd = p.find_global("Forward");
  REQUIRE(fwd);
  REQUIRE(fwd->init);
  CHECK(*fwd->init == Expr::bool_lit(false));
  // An invalid selection fails the feature-model guard and does nothing.
  Program invalid = select(s, {"Forward"});
  CHECK(check(invalid).metrics.states_explored < check(p).metrics.states_explored);
  CHECK_THROWS(select(s, {"Nope"}));
}

TEST_CASE("simulator and products agree on random lines") {
  Rng rng(123);
  int compared = 0;
  for (int i = 0; i < 25; ++i) {
    RandomLine rl = random_line(rng, 5);
    Simulator sim = var_enc(rl.line.modules, rl.line.fm);
    for (std::uint32_t mask : rl.line.fm.valid_masks()) {
      Product p = rl.line.fm.product_of(mask);
      Program composed = compose(rl.line.modules, rl.line.fm, p);
      CHECK(check(select(sim, p)).verdict.kind == check(composed).verdict.kind);
      for (const auto& oa : automata_for(rl.line.specs, p)) {
        Verdict a = check(select(weave_simulator(sim, std::vector<OwnedAutomaton>{oa}), p)).verdict;
        Verdict b = check(weave_automata(composed, {oa})).verdict;
        INFO(rl.dump());
        CHECK(a.kind == b.kind);
        CHECK(a.label == b.label);
        ++compared;
      }
    }
  }
  CHECK(compared > 0);
}

TEST_CASE("checking a simulator finds a violation of some valid product") {
  ProductLine line = load_line(source_path("casestudy/email/email.manifest"));
  Simulator sim = var_enc(line.modules, line.fm);
  SimulatorProgram sp = simulator_program(line, sim, "Encrypt", "EncryptSpec");
  CheckResult r = check(sp.program, sp.opts);
  REQUIRE(r.verdict.kind == VerdictKind::Violation);
  Product sel = selection_product(r.verdict.path.selection, sim.variable_of, line.fm);
  CHECK(is_valid(line.fm, sel));
  CHECK(std::find(sel.begin(), sel.end(), "Forward") != sel.end());
  CHECK(check(product_program(line, sel, "Encrypt", "EncryptSpec")).verdict.kind == VerdictKind::Violation);
}
