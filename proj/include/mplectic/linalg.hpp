#pragma once

// Dense linear algebra over either exact rationals or doubles. Exact paths
// never round; the double paths use the thresholds in ScalarTraits<double>.

#include "mplectic/scalar.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace mplectic {

template <class T>
struct Echelon {
  Matrix<T> reduced;        // reduced row echelon form, zero rows dropped
  std::vector<int> pivots;  // pivot column of each row
};

namespace detail {

template <class T>
T max_abs(const Matrix<T>& m) {
  T best(0);
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      T a = ScalarTraits<T>::abs(m(i, j));
      if (a > best) best = a;
    }
  return best;
}

}  // namespace detail

/// Gauss-Jordan elimination to the canonical reduced row echelon form.
template <class T>
Echelon<T> rref(Matrix<T> m) {
  using Tr = ScalarTraits<T>;
  const T scale = detail::max_abs(m);
  Echelon<T> out;
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < m.cols() && row < m.rows(); ++col) {
    Eigen::Index pivot = -1;
    if constexpr (Tr::exact) {
      for (Eigen::Index i = row; i < m.rows(); ++i)
        if (!m(i, col).is_zero()) { pivot = i; break; }
    } else {
      T best(0);
      for (Eigen::Index i = row; i < m.rows(); ++i)
        if (Tr::abs(m(i, col)) > best) { best = Tr::abs(m(i, col)); pivot = i; }
      if (pivot >= 0 && Tr::is_zero(best, scale)) pivot = -1;
    }
    if (pivot < 0) {
      if constexpr (!Tr::exact) m.col(col).tail(m.rows() - row).setZero();
      continue;
    }
    m.row(row).swap(m.row(pivot));
    const T inv = T(1) / m(row, col);
    m.row(row) *= inv;
    m(row, col) = T(1);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (i == row) continue;
      const T f = m(i, col);
      if (Tr::is_zero(f)) continue;
      m.row(i) -= f * m.row(row);
      m(i, col) = T(0);
    }
    out.pivots.push_back(static_cast<int>(col));
    ++row;
  }
  out.reduced = m.topRows(row);
  return out;
}

/// Rank by fraction-free (Bareiss) elimination.
template <class T>
int bareiss_rank(Matrix<T> m) {
  Eigen::Index r = 0;
  T prev(1);
  for (Eigen::Index col = 0; col < m.cols() && r < m.rows(); ++col) {
    Eigen::Index pivot = -1;
    for (Eigen::Index i = r; i < m.rows(); ++i)
      if (!ScalarTraits<T>::is_zero(m(i, col))) { pivot = i; break; }
    if (pivot < 0) continue;
    m.row(r).swap(m.row(pivot));
    const T p = m(r, col);
    for (Eigen::Index i = r + 1; i < m.rows(); ++i) {
      for (Eigen::Index j = col + 1; j < m.cols(); ++j)
        m(i, j) = (p * m(i, j) - m(i, col) * m(r, j)) / prev;
      m(i, col) = T(0);
    }
    prev = p;
    ++r;
  }
  return static_cast<int>(r);
}

/// Exact rank uses Bareiss elimination; float rank counts singular values
/// above 1e-9 times the largest one.
template <class T>
int rank(const Matrix<T>& m) {
  if (m.size() == 0) return 0;
  if constexpr (ScalarTraits<T>::exact) {
    return bareiss_rank(m);
  } else {
    Eigen::JacobiSVD<Matrix<T>> svd(m);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) return 0;
    int r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
      if (s(i) > ScalarTraits<T>::rank_tolerance * s(0)) ++r;
    return r;
  }
}

/// Basis of {x : m x = 0}, one vector per row, in canonical form (free
/// variables set to unit vectors in increasing column order).
template <class T>
Matrix<T> nullspace(const Matrix<T>& m) {
  const Eigen::Index n = m.cols();
  const Echelon<T> e = rref<T>(m);
  std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
  for (int p : e.pivots) is_pivot[static_cast<std::size_t>(p)] = true;
  const Eigen::Index nfree = n - static_cast<Eigen::Index>(e.pivots.size());
  Matrix<T> basis = Matrix<T>::Zero(nfree, n);
  Eigen::Index k = 0;
  for (Eigen::Index f = 0; f < n; ++f) {
    if (is_pivot[static_cast<std::size_t>(f)]) continue;
    basis(k, f) = T(1);
    for (std::size_t r = 0; r < e.pivots.size(); ++r)
      basis(k, e.pivots[r]) = -e.reduced(static_cast<Eigen::Index>(r), f);
    ++k;
  }
  return basis;
}

/// Determinant; exact path by Bareiss elimination.
template <class T>
T determinant(Matrix<T> m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("determinant: matrix not square");
  const Eigen::Index n = m.rows();
  if (n == 0) return T(1);
  if constexpr (!ScalarTraits<T>::exact) {
    return m.partialPivLu().determinant();
  } else {
    T prev(1);
    int sign = 1;
    for (Eigen::Index k = 0; k < n - 1; ++k) {
      if (m(k, k).is_zero()) {
        Eigen::Index swap_row = -1;
        for (Eigen::Index i = k + 1; i < n; ++i)
          if (!m(i, k).is_zero()) { swap_row = i; break; }
        if (swap_row < 0) return T(0);
        m.row(k).swap(m.row(swap_row));
        sign = -sign;
      }
      for (Eigen::Index i = k + 1; i < n; ++i) {
        for (Eigen::Index j = k + 1; j < n; ++j) m(i, j) = (m(k, k) * m(i, j) - m(i, k) * m(k, j)) / prev;
      }
      prev = m(k, k);
    }
    return sign > 0 ? m(n - 1, n - 1) : T(-m(n - 1, n - 1));
  }
}

/// Solves the square system a x = b; nullopt when a is singular.
template <class T>
std::optional<Vector<T>> solve(const Matrix<T>& a, const Vector<T>& b) {
  if (a.rows() != a.cols() || a.rows() != b.size()) throw DimensionMismatch("solve: shape mismatch");
  const Eigen::Index n = a.rows();
  if constexpr (ScalarTraits<T>::exact) {
    Matrix<T> aug(n, n + 1);
    aug.leftCols(n) = a;
    aug.col(n) = b;
    const Echelon<T> e = rref<T>(aug);
    if (static_cast<Eigen::Index>(e.pivots.size()) != n || (n > 0 && e.pivots.back() != n - 1)) return std::nullopt;
    return Vector<T>(e.reduced.col(n));
  } else {
    if (rank<T>(a) < n) return std::nullopt;
    return Vector<T>(a.fullPivLu().solve(b));
  }
}

template <class T>
std::optional<Matrix<T>> inverse(const Matrix<T>& a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("inverse: matrix not square");
  const Eigen::Index n = a.rows();
  if constexpr (ScalarTraits<T>::exact) {
    Matrix<T> aug(n, 2 * n);
    aug.leftCols(n) = a;
    aug.rightCols(n) = Matrix<T>::Identity(n, n);
    const Echelon<T> e = rref<T>(aug);
    if (static_cast<Eigen::Index>(e.pivots.size()) < n || (n > 0 && e.pivots[static_cast<std::size_t>(n - 1)] != n - 1))
      return std::nullopt;
    return Matrix<T>(e.reduced.topRightCorner(n, n));
  } else {
    if (rank<T>(a) < n) return std::nullopt;
    return Matrix<T>(a.fullPivLu().inverse());
  }
}

}  // namespace mplectic
