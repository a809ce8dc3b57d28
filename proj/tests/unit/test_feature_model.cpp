// Copyright The fav authors
// SPDX-License-Identifier: Apache-2.0

#include <set>

#include "doctest.h"
#include "fav/feature_model.hpp"
#include "support/random_lines.hpp"

using namespace fav;

TEST_CASE("formula syntax") {
  std::vector<std::string> fs = {"A", "B", "C"};
  Formula f = parse_formula("A requires B");
  CHECK(evaluate(f, fs, 0b000));
  CHECK_FALSE(evaluate(f, fs, 0b001));
  CHECK(evaluate(f, fs, 0b011));
  Formula g = parse_formula("A excludes B");
  CHECK_FALSE(evaluate(g, fs, 0b011));
  CHECK(evaluate(g, fs, 0b001));
  Formula h = parse_formula("!(A || B) && C");
  CHECK(evaluate(h, fs, 0b100));
  CHECK_FALSE(evaluate(h, fs, 0b101));
  CHECK(parse_formula(to_string(h)) == h);
  CHECK_THROWS(parse_formula("A &&"));
}

TEST_CASE("constraint models enumerate valid products") {
  auto fm = parse_feature_model(R"(features: Base Fwd Sign
constraints:
  Base
  Fwd requires Sign
)");
  auto products = enumerate_products(fm);
  REQUIRE(products.size() == 3);
  CHECK(products[0] == Product{"Base"});
  CHECK(is_valid(fm, {"Base", "Fwd", "Sign"}));
  CHECK_FALSE(is_valid(fm, {"Base", "Fwd"}));
  CHECK(enumerate_products(fm, std::string("Fwd")).size() == 1);
  CHECK(parse_product(fm, "Sign, Base") == Product{"Base", "Sign"});
  CHECK_THROWS(parse_product(fm, "Base,Nope"));
}

TEST_CASE("product list models") {
  auto fm = parse_feature_model(R"(features: A B C
products:
  A
  A C
)");
  CHECK(fm.valid_masks() == std::vector<std::uint32_t>{0b001, 0b101});
  CHECK(fm.valid_mask(0b101));
  CHECK_FALSE(fm.valid_mask(0b011));
}

TEST_CASE("canonical order compares feature-index sequences") {
  // {0} < {0,1} < {0,1,2} < {0,2} < {1}
  CHECK(canonical_less(0b001, 0b011));
  CHECK(canonical_less(0b011, 0b111));
  CHECK(canonical_less(0b111, 0b101));
  CHECK(canonical_less(0b101, 0b010));
  CHECK_FALSE(canonical_less(0b010, 0b010));
}

TEST_CASE("DNF encoding has one disjunct per product") {
  auto none = FeatureModel::from_products({"A"}, {});
  CHECK(encode_dnf(none) == Formula::truth(false));
  testsupport::Rng rng(5);
  for (int i = 0; i < 30; ++i) {
    int n = 1 + i % 8;
    FeatureModel fm = testsupport::random_feature_model(rng, n);
    Formula dnf = encode_dnf(fm);
    std::set<std::uint32_t> valid(fm.valid_masks().begin(), fm.valid_masks().end());
    for (std::uint32_t m = 0; m < (1u << n); ++m) CHECK(evaluate(dnf, fm.features(), m) == (valid.count(m) > 0));
  }
}

TEST_CASE("formula to FML expression reads the given variables") {
  Expr e = formula_to_expr(parse_formula("A && !B"), {"A", "B"}, {"va", "vb"});
  CHECK(e == Expr::binary(Op::And, Expr::var("va"), Expr::unary(Op::Not, Expr::var("vb"))));
}
