#include "mplectic/multi_index.hpp"

#include <stdexcept>

namespace mplectic {

MultiIndex::MultiIndex(std::vector<int> indices) : idx_(std::move(indices)) {
  for (std::size_t i = 0; i < idx_.size(); ++i) {
    if (idx_[i] < 0) throw std::invalid_argument("MultiIndex: negative index");
    if (i > 0 && idx_[i - 1] >= idx_[i])
      throw std::invalid_argument("MultiIndex: indices must be strictly increasing");
  }
}

int MultiIndex::position(int i) const {
  auto it = std::lower_bound(idx_.begin(), idx_.end(), i);
  if (it == idx_.end() || *it != i) return -1;
  return static_cast<int>(it - idx_.begin());
}

MultiIndex MultiIndex::without(int i) const {
  MultiIndex out;
  out.idx_.reserve(idx_.size());
  for (int v : idx_)
    if (v != i) out.idx_.push_back(v);
  return out;
}

std::size_t MultiIndex::rank(int n) const {
  const int p = static_cast<int>(idx_.size());
  std::size_t r = 0;
  int prev = -1;
  for (int i = 0; i < p; ++i) {
    for (int j = prev + 1; j < idx_[i]; ++j) r += binomial(n - 1 - j, p - 1 - i);
    prev = idx_[i];
  }
  return r;
}

MultiIndex MultiIndex::unrank(std::size_t r, int n, int p) {
  MultiIndex out;
  out.idx_.reserve(static_cast<std::size_t>(p));
  int j = 0;
  for (int i = 0; i < p; ++i) {
    for (;; ++j) {
      const std::size_t block = binomial(n - 1 - j, p - 1 - i);
      if (r < block) break;
      r -= block;
    }
    out.idx_.push_back(j++);
  }
  return out;
}

std::string MultiIndex::to_string(bool bracketed) const {
  std::string s;
  if (bracketed) {
    s = "[";
    for (std::size_t i = 0; i < idx_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(idx_[i] + 1);
    }
    s += "]";
  } else {
    for (int v : idx_) s += std::to_string(v + 1);
  }
  return s;
}

std::vector<MultiIndex> combinations(int n, int p) {
  std::vector<MultiIndex> out;
  if (p < 0 || p > n) return out;
  out.reserve(binomial(n, p));
  std::vector<int> cur(static_cast<std::size_t>(p));
  for (int i = 0; i < p; ++i) cur[static_cast<std::size_t>(i)] = i;
  while (true) {
    out.emplace_back(cur);
    int i = p - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == n - p + i) --i;
    if (i < 0) break;
    ++cur[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < p; ++j) cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

int sort_with_sign(std::vector<int>& v) {
  int sign = 1;
  // insertion sort; tuples are short
  for (std::size_t i = 1; i < v.size(); ++i) {
    for (std::size_t j = i; j > 0 && v[j - 1] >= v[j]; --j) {
      if (v[j - 1] == v[j]) return 0;
      std::swap(v[j - 1], v[j]);
      sign = -sign;
    }
  }
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i - 1] == v[i]) return 0;
  return sign;
}

int merge_sign(const MultiIndex& a, const MultiIndex& b, MultiIndex* merged) {
  std::vector<int> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  std::size_t inversions = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i] < b[j])) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j] < a[i]) {
      // b[j] jumps over the remaining elements of a
      inversions += a.size() - i;
      out.push_back(b[j++]);
    } else {
      return 0;
    }
  }
  if (merged) *merged = MultiIndex(std::move(out));
  return (inversions % 2 == 0) ? 1 : -1;
}

}  // namespace mplectic
