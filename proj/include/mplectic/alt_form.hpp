#pragma once

#include "mplectic/linalg.hpp"
#include "mplectic/multi_index.hpp"

#include <span>
#include <vector>

namespace mplectic {

/// A constant alternating p-covector on R^n, stored densely over strictly
/// increasing multi-indices in lexicographic order. Evaluation follows the
/// determinant convention: dx^I(e_{i_1}, ..., e_{i_p}) = 1, no 1/p! factor.
template <class T>
class AltForm {
 public:
  AltForm() = default;
  AltForm(int n, int degree) : n_(n), degree_(degree) {
    if (n < 0 || n > kMaxDimension) throw std::invalid_argument("AltForm: dimension out of range");
    if (degree < 0 || degree > n) throw std::invalid_argument("AltForm: degree out of range");
    coeffs_ = Vector<T>::Zero(static_cast<Eigen::Index>(binomial(n, degree)));
  }
  AltForm(int n, int degree, Vector<T> coeffs) : AltForm(n, degree) {
    if (coeffs.size() != coeffs_.size()) throw DimensionMismatch("AltForm: coefficient count");
    coeffs_ = std::move(coeffs);
  }

  static AltForm basis(int n, const MultiIndex& index, T coefficient = T(1)) {
    AltForm out(n, static_cast<int>(index.size()));
    out.coeff_ref(index) = std::move(coefficient);
    return out;
  }

  int dim() const { return n_; }
  int degree() const { return degree_; }
  Eigen::Index size() const { return coeffs_.size(); }
  const Vector<T>& coeffs() const { return coeffs_; }

  const T& coeff(const MultiIndex& index) const { return coeffs_(rank_of(index)); }
  T& coeff_ref(const MultiIndex& index) { return coeffs_(rank_of(index)); }
  const T& operator[](Eigen::Index i) const { return coeffs_(i); }
  T& operator[](Eigen::Index i) { return coeffs_(i); }

  std::vector<MultiIndex> indices() const { return combinations(n_, degree_); }

  bool is_zero() const {
    for (Eigen::Index i = 0; i < coeffs_.size(); ++i)
      if (!ScalarTraits<T>::is_zero(coeffs_(i))) return false;
    return true;
  }

  /// a(v_1, ..., v_p) = sum_I a_I det([v_j]_{I}).
  T evaluate(std::span<const Vector<T>> args) const {
    if (static_cast<int>(args.size()) != degree_) throw DimensionMismatch("evaluate: wrong number of arguments");
    for (const auto& v : args)
      if (v.size() != n_) throw DimensionMismatch("evaluate: argument length");
    if (degree_ == 0) return coeffs_(0);
    Matrix<T> cols(n_, degree_);
    for (int j = 0; j < degree_; ++j) cols.col(j) = args[static_cast<std::size_t>(j)];
    T sum(0);
    Matrix<T> minor(degree_, degree_);
    Eigen::Index r = 0;
    for (const MultiIndex& index : indices()) {
      const T& a = coeffs_(r++);
      if (ScalarTraits<T>::is_zero(a)) continue;
      for (int i = 0; i < degree_; ++i) minor.row(i) = cols.row(index[static_cast<std::size_t>(i)]);
      sum += a * determinant<T>(minor);
    }
    return sum;
  }

  template <class U>
  AltForm<U> cast() const {
    Vector<U> c(coeffs_.size());
    for (Eigen::Index i = 0; i < coeffs_.size(); ++i) c(i) = ScalarTraits<U>::from_rational(coeffs_(i));
    return AltForm<U>(n_, degree_, std::move(c));
  }

  AltForm& operator+=(const AltForm& o) { check_same(o); coeffs_ += o.coeffs_; return *this; }
  AltForm& operator-=(const AltForm& o) { check_same(o); coeffs_ -= o.coeffs_; return *this; }
  AltForm& operator*=(const T& s) { coeffs_ *= s; return *this; }
  friend AltForm operator+(AltForm a, const AltForm& b) { return a += b; }
  friend AltForm operator-(AltForm a, const AltForm& b) { return a -= b; }
  friend AltForm operator-(AltForm a) { a.coeffs_ = -a.coeffs_; return a; }
  friend AltForm operator*(const T& s, AltForm a) { return a *= s; }
  friend AltForm operator*(AltForm a, const T& s) { return a *= s; }

  friend bool operator==(const AltForm& a, const AltForm& b) {
    return a.n_ == b.n_ && a.degree_ == b.degree_ && a.coeffs_ == b.coeffs_;
  }

 private:
  Eigen::Index rank_of(const MultiIndex& index) const {
    if (static_cast<int>(index.size()) != degree_) throw DimensionMismatch("AltForm: multi-index length");
    if (!index.empty() && index.indices().back() >= n_) throw DimensionMismatch("AltForm: index out of range");
    return static_cast<Eigen::Index>(index.rank(n_));
  }
  void check_same(const AltForm& o) const {
    if (n_ != o.n_ || degree_ != o.degree_) throw DimensionMismatch("AltForm: shape mismatch");
  }

  int n_ = 0;
  int degree_ = 0;
  Vector<T> coeffs_ = Vector<T>::Zero(1);
};

using AltFormQ = AltForm<Rational>;
using AltFormD = AltForm<double>;

template <class T>
AltForm<T> wedge(const AltForm<T>& a, const AltForm<T>& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("wedge: dimension mismatch");
  const int n = a.dim();
  if (a.degree() + b.degree() > n) throw PreconditionError("wedge: degree exceeds dimension");
  AltForm<T> out(n, a.degree() + b.degree());
  const auto ia = a.indices();
  const auto ib = b.indices();
  for (std::size_t i = 0; i < ia.size(); ++i) {
    const T& ca = a[static_cast<Eigen::Index>(i)];
    if (ScalarTraits<T>::is_zero(ca)) continue;
    for (std::size_t j = 0; j < ib.size(); ++j) {
      const T& cb = b[static_cast<Eigen::Index>(j)];
      if (ScalarTraits<T>::is_zero(cb)) continue;
      MultiIndex merged;
      const int s = merge_sign(ia[i], ib[j], &merged);
      if (s == 0) continue;
      if (s > 0)
        out.coeff_ref(merged) += ca * cb;
      else
        out.coeff_ref(merged) -= ca * cb;
    }
  }
  return out;
}

/// Interior product inserting v into the first slot.
template <class T>
AltForm<T> contract(const Vector<T>& v, const AltForm<T>& a) {
  if (v.size() != a.dim()) throw DimensionMismatch("contract: dimension mismatch");
  if (a.degree() == 0) throw PreconditionError("contract: degree-0 form");
  AltForm<T> out(a.dim(), a.degree() - 1);
  Eigen::Index r = 0;
  for (const MultiIndex& index : a.indices()) {
    const T& c = a[r++];
    if (ScalarTraits<T>::is_zero(c)) continue;
    for (std::size_t s = 0; s < index.size(); ++s) {
      const T& vi = v(index[s]);
      if (ScalarTraits<T>::is_zero(vi)) continue;
      T term = vi * c;
      if (s % 2 == 1) term = -term;
      out.coeff_ref(index.without(index[s])) += term;
    }
  }
  return out;
}

/// Iterated contraction: vs[0] first, i.e. the result is a(vs[0], vs[1], ..., .).
template <class T>
AltForm<T> multi_contract(std::span<const Vector<T>> vs, const AltForm<T>& a) {
  if (static_cast<int>(vs.size()) > a.degree()) throw PreconditionError("multi_contract: too many vectors");
  AltForm<T> out = a;
  for (const auto& v : vs) out = contract(v, out);
  return out;
}

template <class T>
AltForm<T> multi_contract(const std::vector<Vector<T>>& vs, const AltForm<T>& a) {
  return multi_contract(std::span<const Vector<T>>(vs), a);
}

/// Matrix of v -> iota_v a; column i is contract(e_i, a) in the multi-index basis.
template <class T>
Matrix<T> sharp_matrix(const AltForm<T>& a) {
  if (a.degree() < 1) throw PreconditionError("sharp_matrix: degree-0 form");
  const int n = a.dim();
  Matrix<T> m = Matrix<T>::Zero(static_cast<Eigen::Index>(binomial(n, a.degree() - 1)), n);
  Eigen::Index r = 0;
  for (const MultiIndex& index : a.indices()) {
    const T& c = a[r++];
    if (ScalarTraits<T>::is_zero(c)) continue;
    for (std::size_t s = 0; s < index.size(); ++s) {
      const auto row = static_cast<Eigen::Index>(index.without(index[s]).rank(n));
      if (s % 2 == 1)
        m(row, index[s]) -= c;
      else
        m(row, index[s]) += c;
    }
  }
  return m;
}

template <class T>
int sharp_rank(const AltForm<T>& a) {
  return rank<T>(sharp_matrix(a));
}

template <class T>
bool is_nondegenerate(const AltForm<T>& a) {
  return a.degree() >= 1 && sharp_rank(a) == a.dim();
}

/// (G^* a)(v_1, ..., v_p) = a(G v_1, ..., G v_p).
template <class T>
AltForm<T> pullback_linear(const Matrix<T>& g, const AltForm<T>& a) {
  const int n = a.dim();
  if (g.rows() != n || g.cols() != n) throw DimensionMismatch("pullback_linear: shape mismatch");
  const int p = a.degree();
  AltForm<T> out(n, p);
  if (p == 0) return a;
  const auto idx = a.indices();
  Matrix<T> minor(p, p);
  for (std::size_t j = 0; j < idx.size(); ++j) {
    T sum(0);
    for (std::size_t i = 0; i < idx.size(); ++i) {
      const T& c = a[static_cast<Eigen::Index>(i)];
      if (ScalarTraits<T>::is_zero(c)) continue;
      for (int r = 0; r < p; ++r)
        for (int s = 0; s < p; ++s) minor(r, s) = g(idx[i][static_cast<std::size_t>(r)], idx[j][static_cast<std::size_t>(s)]);
      sum += c * determinant<T>(minor);
    }
    out[static_cast<Eigen::Index>(j)] = sum;
  }
  return out;
}

template <class T>
Vector<T> unit_vector(int n, int i) {
  Vector<T> v = Vector<T>::Zero(n);
  v(i) = T(1);
  return v;
}

}  // namespace mplectic
