// Copyright The fav authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <vector>

namespace fav::vm {

/// Set of feature assignments over k variables; assignment a has bit i
/// set iff variable i is true.
class ProductSet {
 public:
  static constexpr int kMaxVariables = 16;

  ProductSet() = default;
  ProductSet(int k, bool full) : k_(k), words_(word_count(k), full ? ~std::uint64_t{0} : 0) { trim(); }

  int variables() const { return k_; }
  std::uint32_t universe() const { return std::uint32_t{1} << k_; }

  bool test(std::uint32_t a) const { return (words_[a >> 6] >> (a & 63)) & 1u; }
  void set(std::uint32_t a) { words_[a >> 6] |= std::uint64_t{1} << (a & 63); }
  void reset(std::uint32_t a) { words_[a >> 6] &= ~(std::uint64_t{1} << (a & 63)); }

  bool empty() const {
    for (auto w : words_)
      if (w) return false;
    return true;
  }
  std::size_t count() const {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }
  bool intersects(const ProductSet& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & o.words_[i]) return true;
    return false;
  }
  bool subset_of(const ProductSet& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~o.words_[i]) return false;
    return true;
  }
  ProductSet operator&(const ProductSet& o) const {
    ProductSet r = *this;
    for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] &= o.words_[i];
    return r;
  }
  ProductSet minus(const ProductSet& o) const {
    ProductSet r = *this;
    for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] &= ~o.words_[i];
    return r;
  }
  ProductSet& operator|=(const ProductSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  bool operator==(const ProductSet&) const = default;

  /// Member preferred by the true-first order: variable 0 true beats
  /// variable 0 false, then variable 1, and so on.
  std::optional<std::uint32_t> preferred() const {
    std::optional<std::uint32_t> best;
    std::uint32_t best_key = 0;
    for (std::uint32_t a = 0; a < universe(); ++a) {
      if (!test(a)) continue;
      std::uint32_t key = 0;
      for (int i = 0; i < k_; ++i) key |= ((a >> i) & 1u) << (k_ - 1 - i);
      if (!best || key > best_key) {
        best = a;
        best_key = key;
      }
    }
    return best;
  }

 private:
  static std::size_t word_count(int k) { return ((std::size_t{1} << k) + 63) / 64; }
  void trim() {
    std::uint32_t n = universe();
    if (n < 64) words_[0] &= (std::uint64_t{1} << n) - 1;
  }

  int k_ = 0;
  std::vector<std::uint64_t> words_ = std::vector<std::uint64_t>(1, 0);
};

}  // namespace fav::vm
