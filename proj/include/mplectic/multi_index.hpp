#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace mplectic {

inline constexpr int kMaxDimension = 16;

/// Binomial coefficient C(n, p); zero outside 0 <= p <= n.
constexpr std::size_t binomial(int n, int p) {
  if (p < 0 || n < 0 || p > n) return 0;
  if (p > n - p) p = n - p;
  std::size_t v = 1;
  for (int i = 0; i < p; ++i) v = v * static_cast<std::size_t>(n - i) / static_cast<std::size_t>(i + 1);
  return v;
}

/// A strictly increasing tuple of zero-based coordinate indices. Printed
/// one-based. Ordered lexicographically.
class MultiIndex {
 public:
  MultiIndex() = default;
  /// Throws std::invalid_argument unless strictly increasing and non-negative.
  explicit MultiIndex(std::vector<int> indices);
  MultiIndex(std::initializer_list<int> indices) : MultiIndex(std::vector<int>(indices)) {}

  std::size_t size() const { return idx_.size(); }
  bool empty() const { return idx_.empty(); }
  int operator[](std::size_t i) const { return idx_[i]; }
  const std::vector<int>& indices() const { return idx_; }
  auto begin() const { return idx_.begin(); }
  auto end() const { return idx_.end(); }
  bool contains(int i) const { return std::binary_search(idx_.begin(), idx_.end(), i); }

  /// Position of index i within this multi-index, or -1.
  int position(int i) const;
  MultiIndex without(int i) const;

  /// Lexicographic rank among all p-subsets of {0..n-1}.
  std::size_t rank(int n) const;
  static MultiIndex unrank(std::size_t r, int n, int p);

  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;
  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

  /// "145" style (one-based) or "[1,4,15]" when `bracketed`.
  std::string to_string(bool bracketed = false) const;

 private:
  std::vector<int> idx_;
};

/// All p-subsets of {0..n-1} in lexicographic order.
std::vector<MultiIndex> combinations(int n, int p);

/// Sorts `indices` in place. Returns the sign of the sorting permutation, or
/// 0 if a repeated entry was found.
int sort_with_sign(std::vector<int>& indices);

/// Sign of the shuffle that merges disjoint increasing tuples a and b into
/// increasing order; 0 when they overlap.
int merge_sign(const MultiIndex& a, const MultiIndex& b, MultiIndex* merged);

}  // namespace mplectic
