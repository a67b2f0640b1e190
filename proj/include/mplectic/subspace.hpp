#pragma once

#include "mplectic/alt_form.hpp"

#include <vector>

namespace mplectic {

/// A linear subspace of R^n held as the reduced row echelon form of a
/// spanning set. The representation is canonical, so operator== is
/// mathematical equality.
template <class T>
class Subspace {
 public:
  Subspace() = default;
  explicit Subspace(int n) : n_(n), basis_(0, n) {}

  /// Span of the rows of `rows`.
  static Subspace span(const Matrix<T>& rows) {
    Subspace s(static_cast<int>(rows.cols()));
    Echelon<T> e = rref<T>(rows);
    s.basis_ = std::move(e.reduced);
    s.pivots_ = std::move(e.pivots);
    return s;
  }
  static Subspace span(int n, const std::vector<Vector<T>>& vectors) {
    Matrix<T> rows(static_cast<Eigen::Index>(vectors.size()), n);
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      if (vectors[i].size() != n) throw DimensionMismatch("Subspace::span: vector length");
      rows.row(static_cast<Eigen::Index>(i)) = vectors[i].transpose();
    }
    return span(rows);
  }
  static Subspace zero(int n) { return Subspace(n); }
  static Subspace full(int n) { return span(Matrix<T>::Identity(n, n)); }
  /// span(e_i : i in indices), zero-based.
  static Subspace coordinate(int n, const std::vector<int>& indices) {
    Matrix<T> rows = Matrix<T>::Zero(static_cast<Eigen::Index>(indices.size()), n);
    for (std::size_t r = 0; r < indices.size(); ++r) rows(static_cast<Eigen::Index>(r), indices[r]) = T(1);
    return span(rows);
  }
  /// {x : m x = 0}.
  static Subspace kernel(const Matrix<T>& m) { return span(nullspace<T>(m)); }

  int ambient() const { return n_; }
  int dim() const { return static_cast<int>(basis_.rows()); }
  const Matrix<T>& basis() const { return basis_; }
  const std::vector<int>& pivots() const { return pivots_; }
  Vector<T> basis_vector(int i) const { return basis_.row(i).transpose(); }
  std::vector<Vector<T>> basis_vectors() const {
    std::vector<Vector<T>> out;
    for (int i = 0; i < dim(); ++i) out.push_back(basis_vector(i));
    return out;
  }

  bool contains(const Vector<T>& v) const {
    if (v.size() != n_) throw DimensionMismatch("Subspace::contains: vector length");
    // reduce v against the echelon rows
    Vector<T> r = v;
    for (int i = 0; i < dim(); ++i) {
      const T f = r(pivots_[static_cast<std::size_t>(i)]);
      if (!ScalarTraits<T>::is_zero(f)) r -= f * basis_.row(i).transpose();
    }
    T scale(0);
    for (Eigen::Index i = 0; i < v.size(); ++i)
      if (ScalarTraits<T>::abs(v(i)) > scale) scale = ScalarTraits<T>::abs(v(i));
    for (Eigen::Index i = 0; i < r.size(); ++i)
      if (!ScalarTraits<T>::is_zero(r(i), scale)) return false;
    return true;
  }
  bool contains(const Subspace& other) const {
    check_same(other);
    for (int i = 0; i < other.dim(); ++i)
      if (!contains(other.basis_vector(i))) return false;
    return true;
  }

  /// Rows spanning the annihilator, as a matrix whose kernel is this space.
  Matrix<T> annihilator() const {
    if (dim() == 0) return Matrix<T>::Identity(n_, n_);
    return nullspace<T>(basis_);
  }

  friend bool operator==(const Subspace& a, const Subspace& b) {
    if (a.n_ != b.n_ || a.dim() != b.dim() || a.pivots_ != b.pivots_) return false;
    if constexpr (ScalarTraits<T>::exact) {
      return a.basis_ == b.basis_;
    } else {
      return a.dim() == 0 || (a.basis_ - b.basis_).cwiseAbs().maxCoeff() <= 1e-9;
    }
  }

 private:
  void check_same(const Subspace& o) const {
    if (n_ != o.n_) throw DimensionMismatch("Subspace: ambient dimension mismatch");
  }

  int n_ = 0;
  Matrix<T> basis_;
  std::vector<int> pivots_;
};

using SubspaceQ = Subspace<Rational>;
using SubspaceD = Subspace<double>;

template <class T>
Subspace<T> sum(const Subspace<T>& a, const Subspace<T>& b) {
  if (a.ambient() != b.ambient()) throw DimensionMismatch("sum: ambient dimension mismatch");
  Matrix<T> rows(a.dim() + b.dim(), a.ambient());
  rows << a.basis(), b.basis();
  return Subspace<T>::span(rows);
}

template <class T>
Subspace<T> intersection(const Subspace<T>& a, const Subspace<T>& b) {
  if (a.ambient() != b.ambient()) throw DimensionMismatch("intersection: ambient dimension mismatch");
  const Matrix<T> ann_a = a.annihilator();
  const Matrix<T> ann_b = b.annihilator();
  Matrix<T> stacked(ann_a.rows() + ann_b.rows(), a.ambient());
  stacked << ann_a, ann_b;
  return Subspace<T>::kernel(stacked);
}

/// Coordinate complement: span of e_i over the non-pivot columns of U.
template <class T>
Subspace<T> complement_of(const Subspace<T>& u) {
  std::vector<int> free;
  const auto& piv = u.pivots();
  for (int i = 0; i < u.ambient(); ++i)
    if (std::find(piv.begin(), piv.end(), i) == piv.end()) free.push_back(i);
  return Subspace<T>::coordinate(u.ambient(), free);
}

template <class T>
bool are_complementary(const Subspace<T>& a, const Subspace<T>& b) {
  return a.dim() + b.dim() == a.ambient() && sum(a, b).dim() == a.ambient();
}

/// Matrix of the linear map v -> (iota_{v ^ u_S} omega)_S stacked over all
/// j-subsets S of the basis of U, enumerated lexicographically.
template <class T>
Matrix<T> orth_constraint_matrix(const AltForm<T>& omega, const Subspace<T>& u, int j) {
  const int n = omega.dim();
  if (u.ambient() != n) throw DimensionMismatch("orth_complement: ambient dimension mismatch");
  const int k = omega.degree() - 1;
  if (j < 1 || j > k) throw PreconditionError("orth_complement: j out of range");
  std::vector<Matrix<T>> blocks;
  Eigen::Index rows = 0;
  const auto basis = u.basis_vectors();
  for (const MultiIndex& subset : combinations(u.dim(), j)) {
    std::vector<Vector<T>> us;
    for (int s : subset) us.push_back(basis[static_cast<std::size_t>(s)]);
    // omega(u_S, v, .) differs from omega(v, u_S, .) by a sign, irrelevant for the kernel
    blocks.push_back(sharp_matrix(multi_contract(us, omega)));
    rows += blocks.back().rows();
  }
  Matrix<T> m(rows, n);
  Eigen::Index r = 0;
  for (const auto& b : blocks) {
    m.middleRows(r, b.rows()) = b;
    r += b.rows();
  }
  return m;
}

/// U^{perp,j} = {v : iota_{v ^ u_1 ^ ... ^ u_j} omega = 0 for all u_i in U}.
template <class T>
Subspace<T> orth_complement(const AltForm<T>& omega, const Subspace<T>& u, int j) {
  const Matrix<T> m = orth_constraint_matrix(omega, u, j);
  if (m.rows() == 0) return Subspace<T>::full(omega.dim());
  return Subspace<T>::kernel(m);
}

template <class T>
bool is_isotropic(const AltForm<T>& omega, const Subspace<T>& u, int j) {
  return orth_complement(omega, u, j).contains(u);
}

template <class T>
bool is_lagrangian(const AltForm<T>& omega, const Subspace<T>& u, int j) {
  return orth_complement(omega, u, j) == u;
}

}  // namespace mplectic
