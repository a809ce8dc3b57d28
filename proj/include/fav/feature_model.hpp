// Copyright The fav authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fav/ast.hpp"

namespace fav {

/// Propositional formula over feature names.
struct Formula {
  enum class Kind { True, False, Var, Not, And, Or };
  Kind kind = Kind::True;
  std::string var;
  std::vector<Formula> kids;

  static Formula truth(bool v) { return {v ? Kind::True : Kind::False, {}, {}}; }
  static Formula variable(std::string v) { return {Kind::Var, std::move(v), {}}; }
  static Formula negate(Formula f);
  static Formula conj(std::vector<Formula> fs);
  static Formula disj(std::vector<Formula> fs);

  bool operator==(const Formula&) const = default;
};

std::string to_string(const Formula& f);
Formula parse_formula(std::string_view text);

/// Features of a product, listed in the global feature order.
using Product = std::vector<std::string>;

/// Feature set plus valid products, given either explicitly or by a
/// constraint formula. Constraint models are expanded on demand.
class FeatureModel {
 public:
  static constexpr std::size_t kMaxFeatures = 24;

  FeatureModel() = default;
  static FeatureModel from_products(std::vector<std::string> features, const std::vector<Product>& products);
  static FeatureModel from_constraint(std::vector<std::string> features, Formula constraint);

  const std::vector<std::string>& features() const { return features_; }
  std::optional<std::size_t> index_of(const std::string& feature) const;
  /// Bit i set iff features()[i] is selected. Throws on unknown names.
  std::uint32_t mask_of(const Product& p) const;
  Product product_of(std::uint32_t mask) const;

  /// Valid products as masks, sorted canonically.
  const std::vector<std::uint32_t>& valid_masks() const { return valid_; }
  bool valid_mask(std::uint32_t mask) const;

  const std::optional<Formula>& constraint() const { return constraint_; }

 private:
  void init_features(std::vector<std::string> features);
  std::vector<std::string> features_;
  std::optional<Formula> constraint_;
  std::vector<std::uint32_t> valid_;
};

/// Parses a `.fm` file: `features:` line followed by a `constraints:` or a
/// `products:` block.
FeatureModel parse_feature_model(std::string_view text);

/// Evaluates f with feature i taken from bit i of mask.
bool evaluate(const Formula& f, const std::vector<std::string>& features, std::uint32_t mask);

bool is_valid(const FeatureModel& fm, const Product& p);
/// One disjunct per valid product; `false` when there is none.
Formula encode_dnf(const FeatureModel& fm);
std::vector<Product> enumerate_products(const FeatureModel& fm,
                                        const std::optional<std::string>& must_contain = std::nullopt);

/// Canonical product order: compares feature-index sequences lexicographically.
bool canonical_less(std::uint32_t a, std::uint32_t b);

std::string to_string(const Product& p);
/// Parses "A,B,C" (commas and/or whitespace) into a product in fm order.
Product parse_product(const FeatureModel& fm, std::string_view text);

/// FML expression of f; feature i is read from variable_names[i].
Expr formula_to_expr(const Formula& f, const std::vector<std::string>& features,
                     const std::vector<std::string>& variable_names);

}  // namespace fav
