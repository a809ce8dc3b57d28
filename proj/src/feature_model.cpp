// Copyright The fav authors
// SPDX-License-Identifier: Apache-2.0

#include "fav/feature_model.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <set>
#include <sstream>

namespace fav {

Formula Formula::negate(Formula f) {
  if (f.kind == Kind::True) return truth(false);
  if (f.kind == Kind::False) return truth(true);
  return {Kind::Not, {}, {std::move(f)}};
}

Formula Formula::conj(std::vector<Formula> fs) {
  if (fs.empty()) return truth(true);
  if (fs.size() == 1) return std::move(fs[0]);
  return {Kind::And, {}, std::move(fs)};
}

Formula Formula::disj(std::vector<Formula> fs) {
  if (fs.empty()) return truth(false);
  if (fs.size() == 1) return std::move(fs[0]);
  return {Kind::Or, {}, std::move(fs)};
}

namespace {

void render(std::ostringstream& os, const Formula& f, int parent) {
  using K = Formula::Kind;
  switch (f.kind) {
    case K::True: os << "true"; return;
    case K::False: os << "false"; return;
    case K::Var: os << f.var; return;
    case K::Not:
      os << '!';
      render(os, f.kids[0], 3);
      return;
    case K::And:
    case K::Or: {
      int prec = f.kind == K::Or ? 1 : 2;
      if (prec < parent) os << '(';
      for (std::size_t i = 0; i < f.kids.size(); ++i) {
        if (i) os << (f.kind == K::Or ? " || " : " && ");
        render(os, f.kids[i], prec + 1);
      }
      if (prec < parent) os << ')';
      return;
    }
  }
}

class FormulaParser {
 public:
  explicit FormulaParser(std::string_view s) : s_(s) {}

  Formula parse_all() {
    Formula f = implication();
    skip_ws();
    if (i_ != s_.size()) error("unexpected '" + std::string(s_.substr(i_)) + "'");
    return f;
  }

 private:
  [[noreturn]] void error(const std::string& m) const { throw FavError("feature formula: " + m); }

  void skip_ws() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }

  bool accept(std::string_view tok) {
    skip_ws();
    if (s_.substr(i_, tok.size()) != tok) return false;
    // Word operators must not be a prefix of a longer identifier.
    if (std::isalpha(static_cast<unsigned char>(tok[0])) && i_ + tok.size() < s_.size()) {
      char c = s_[i_ + tok.size()];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') return false;
    }
    i_ += tok.size();
    return true;
  }

  Formula implication() {
    Formula lhs = disjunction();
    if (accept("requires")) return Formula::disj({Formula::negate(lhs), disjunction()});
    if (accept("excludes")) return Formula::negate(Formula::conj({lhs, disjunction()}));
    return lhs;
  }

  Formula disjunction() {
    std::vector<Formula> fs{conjunction()};
    while (accept("||")) fs.push_back(conjunction());
    return fs.size() == 1 ? std::move(fs[0]) : Formula{Formula::Kind::Or, {}, std::move(fs)};
  }

  Formula conjunction() {
    std::vector<Formula> fs{negation()};
    while (accept("&&")) fs.push_back(negation());
    return fs.size() == 1 ? std::move(fs[0]) : Formula{Formula::Kind::And, {}, std::move(fs)};
  }

  Formula negation() {
    if (accept("!")) return Formula{Formula::Kind::Not, {}, {negation()}};
    return atom();
  }

  Formula atom() {
    skip_ws();
    if (accept("(")) {
      Formula f = implication();
      if (!accept(")")) error("expected ')'");
      return f;
    }
    std::size_t start = i_;
    while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
    if (start == i_) error("expected a feature name");
    std::string w(s_.substr(start, i_ - start));
    if (w == "true") return Formula::truth(true);
    if (w == "false") return Formula::truth(false);
    return Formula::variable(w);
  }

  std::string_view s_;
  std::size_t i_ = 0;
};

void collect_vars(const Formula& f, std::set<std::string>& out) {
  if (f.kind == Formula::Kind::Var) out.insert(f.var);
  for (const auto& k : f.kids) collect_vars(k, out);
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_words(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

}  // namespace

std::string to_string(const Formula& f) {
  std::ostringstream os;
  render(os, f, 0);
  return os.str();
}

Formula parse_formula(std::string_view text) { return FormulaParser(text).parse_all(); }

bool evaluate(const Formula& f, const std::vector<std::string>& features, std::uint32_t mask) {
  using K = Formula::Kind;
  switch (f.kind) {
    case K::True: return true;
    case K::False: return false;
    case K::Var: {
      auto it = std::find(features.begin(), features.end(), f.var);
      if (it == features.end()) throw FavError("unknown feature '" + f.var + "'");
      return (mask >> (it - features.begin())) & 1u;
    }
    case K::Not: return !evaluate(f.kids[0], features, mask);
    case K::And:
      for (const auto& k : f.kids)
        if (!evaluate(k, features, mask)) return false;
      return true;
    case K::Or:
      for (const auto& k : f.kids)
        if (evaluate(k, features, mask)) return true;
      return false;
  }
  return false;
}

bool canonical_less(std::uint32_t a, std::uint32_t b) {
  // Lexicographic on ascending index sequences; a proper prefix sorts first.
  while (a && b) {
    int ia = std::countr_zero(a), ib = std::countr_zero(b);
    if (ia != ib) return ia < ib;
    a &= a - 1;
    b &= b - 1;
  }
  return a == 0 && b != 0;
}

void FeatureModel::init_features(std::vector<std::string> features) {
  if (features.size() > kMaxFeatures) throw FavError("too many features (limit 24)");
  std::set<std::string> seen;
  for (const auto& f : features)
    if (!seen.insert(f).second) throw FavError("duplicate feature '" + f + "'");
  features_ = std::move(features);
}

FeatureModel FeatureModel::from_products(std::vector<std::string> features, const std::vector<Product>& products) {
  FeatureModel fm;
  fm.init_features(std::move(features));
  std::set<std::uint32_t> masks;
  for (const auto& p : products) masks.insert(fm.mask_of(p));
  fm.valid_.assign(masks.begin(), masks.end());
  std::sort(fm.valid_.begin(), fm.valid_.end(), canonical_less);
  return fm;
}

FeatureModel FeatureModel::from_constraint(std::vector<std::string> features, Formula constraint) {
  FeatureModel fm;
  fm.init_features(std::move(features));
  std::set<std::string> vars;
  collect_vars(constraint, vars);
  for (const auto& v : vars)
    if (!fm.index_of(v)) throw FavError("constraint mentions unknown feature '" + v + "'");
  const std::uint64_t n = std::uint64_t{1} << fm.features_.size();
  for (std::uint64_t m = 0; m < n; ++m)
    if (evaluate(constraint, fm.features_, static_cast<std::uint32_t>(m)))
      fm.valid_.push_back(static_cast<std::uint32_t>(m));
  std::sort(fm.valid_.begin(), fm.valid_.end(), canonical_less);
  fm.constraint_ = std::move(constraint);
  return fm;
}

std::optional<std::size_t> FeatureModel::index_of(const std::string& feature) const {
  auto it = std::find(features_.begin(), features_.end(), feature);
  if (it == features_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - features_.begin());
}

std::uint32_t FeatureModel::mask_of(const Product& p) const {
  std::uint32_t m = 0;
  for (const auto& f : p) {
    auto i = index_of(f);
    if (!i) throw FavError("unknown feature '" + f + "'");
    m |= 1u << *i;
  }
  return m;
}

Product FeatureModel::product_of(std::uint32_t mask) const {
  Product p;
  for (std::size_t i = 0; i < features_.size(); ++i)
    if ((mask >> i) & 1u) p.push_back(features_[i]);
  return p;
}

bool FeatureModel::valid_mask(std::uint32_t mask) const {
  return std::binary_search(valid_.begin(), valid_.end(), mask, canonical_less);
}

FeatureModel parse_feature_model(std::string_view text) {
  std::vector<std::string> features;
  bool have_features = false;
  enum class Block { None, Constraints, Products } block = Block::None;
  bool have_block = false;
  std::vector<Formula> constraints;
  std::vector<std::vector<std::string>> products;

  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    for (std::string_view marker : {"#", "//"})
      if (auto pos = line.find(marker); pos != std::string::npos) line.resize(pos);
    line = trim(line);
    if (line.empty()) continue;
    auto where = [&] { return " (line " + std::to_string(line_no) + ")"; };
    if (line.rfind("features:", 0) == 0) {
      if (have_features) throw FavError("duplicate 'features:'" + where());
      if (have_block) throw FavError("'features:' must come first" + where());
      have_features = true;
      features = split_words(std::string_view(line).substr(9));
      continue;
    }
    for (auto [key, kind] : {std::pair{"constraints:", Block::Constraints}, std::pair{"products:", Block::Products}}) {
      std::string_view k = key;
      if (line.rfind(k, 0) == 0) {
        if (have_block) throw FavError("only one of 'constraints:' and 'products:' is allowed" + where());
        have_block = true;
        block = kind;
        line = trim(std::string_view(line).substr(k.size()));
        break;
      }
    }
    if (line.empty()) continue;
    if (block == Block::Constraints) {
      constraints.push_back(parse_formula(line));
    } else if (block == Block::Products) {
      if (line == "{}") {
        products.emplace_back();
      } else {
        products.push_back(split_words(line));
      }
    } else {
      throw FavError("unexpected line '" + line + "'" + where());
    }
  }
  if (!have_features) throw FavError("feature model lacks a 'features:' line");
  if (!have_block) throw FavError("feature model needs a 'constraints:' or 'products:' block");
  if (block == Block::Products) return FeatureModel::from_products(std::move(features), products);
  return FeatureModel::from_constraint(std::move(features), Formula::conj(std::move(constraints)));
}

bool is_valid(const FeatureModel& fm, const Product& p) { return fm.valid_mask(fm.mask_of(p)); }

Formula encode_dnf(const FeatureModel& fm) {
  std::vector<Formula> disjuncts;
  for (std::uint32_t m : fm.valid_masks()) {
    std::vector<Formula> lits;
    for (std::size_t i = 0; i < fm.features().size(); ++i) {
      Formula v = Formula::variable(fm.features()[i]);
      lits.push_back((m >> i) & 1u ? v : Formula::negate(v));
    }
    disjuncts.push_back(Formula::conj(std::move(lits)));
  }
  return Formula::disj(std::move(disjuncts));
}

std::vector<Product> enumerate_products(const FeatureModel& fm, const std::optional<std::string>& must_contain) {
  std::uint32_t need = 0;
  if (must_contain) need = fm.mask_of({*must_contain});
  std::vector<Product> out;
  for (std::uint32_t m : fm.valid_masks())
    if ((m & need) == need) out.push_back(fm.product_of(m));
  return out;
}

std::string to_string(const Product& p) {
  std::string out = "{";
  for (std::size_t i = 0; i < p.size(); ++i) out += (i ? ", " : "") + p[i];
  return out + "}";
}

Product parse_product(const FeatureModel& fm, std::string_view text) {
  return fm.product_of(fm.mask_of(split_words(text)));
}

Expr formula_to_expr(const Formula& f, const std::vector<std::string>& features,
                     const std::vector<std::string>& variable_names) {
  using K = Formula::Kind;
  switch (f.kind) {
    case K::True: return Expr::bool_lit(true);
    case K::False: return Expr::bool_lit(false);
    case K::Var: {
      auto it = std::find(features.begin(), features.end(), f.var);
      if (it == features.end()) throw FavError("unknown feature '" + f.var + "'");
      return Expr::var(variable_names.at(static_cast<std::size_t>(it - features.begin())));
    }
    case K::Not: return Expr::unary(Op::Not, formula_to_expr(f.kids[0], features, variable_names));
    case K::And:
    case K::Or: {
      Op op = f.kind == K::And ? Op::And : Op::Or;
      Expr acc = formula_to_expr(f.kids[0], features, variable_names);
      for (std::size_t i = 1; i < f.kids.size(); ++i)
        acc = Expr::binary(op, std::move(acc), formula_to_expr(f.kids[i], features, variable_names));
      return acc;
    }
  }
  return Expr::bool_lit(false);
}

}  // namespace fav
