#pragma once

// Differential forms with exact polynomial coefficients on R^n.

#include "mplectic/alt_form.hpp"

#include <map>
#include <span>
#include <vector>

namespace mplectic {

/// Sparse multivariate polynomial with rational coefficients. No zero
/// coefficient is ever stored.
class Poly {
 public:
  using Exponent = std::vector<int>;

  Poly() = default;
  explicit Poly(int nvars) : nvars_(nvars) {}
  static Poly constant(int nvars, const Rational& c);
  static Poly variable(int nvars, int i);
  static Poly monomial(int nvars, Exponent e, const Rational& c);

  int nvars() const { return nvars_; }
  const std::map<Exponent, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;  // -1 for the zero polynomial
  /// Coefficient of the constant monomial.
  Rational constant_term() const;

  void add_term(const Exponent& e, const Rational& c);

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Rational& s);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator-(Poly a) { return a *= Rational(-1); }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(const Rational& s, Poly a) { return a *= s; }
  friend bool operator==(const Poly& a, const Poly& b) = default;

  Poly derivative(int i) const;
  Poly pow(int e) const;
  /// p(values_0, ..., values_{nvars-1}); all values share one variable count.
  Poly substitute(const std::vector<Poly>& values) const;
  /// Sets the variables with index >= keep to zero and drops them.
  Poly truncate_variables(int keep) const;

  template <class T>
  T eval(std::span<const T> x) const {
    if (static_cast<int>(x.size()) != nvars_) throw DimensionMismatch("Poly::eval: point dimension");
    T sum(0);
    for (const auto& [e, c] : terms_) {
      T term = ScalarTraits<T>::from_rational(c);
      for (int i = 0; i < nvars_; ++i)
        for (int p = 0; p < e[static_cast<std::size_t>(i)]; ++p) term *= x[static_cast<std::size_t>(i)];
      sum += term;
    }
    return sum;
  }

 private:
  void check_same(const Poly& o) const;

  int nvars_ = 0;
  std::map<Exponent, Rational> terms_;
};

/// Polynomial map R^{n_in} -> R^{n_out}. A vector field is the case n_in == n_out.
struct PolyMap {
  int n_in = 0;
  int n_out = 0;
  std::vector<Poly> components;

  static PolyMap identity(int n);
  static PolyMap constant(int n_in, const VectorQ& value);
  template <class T>
  Vector<T> eval(std::span<const T> x) const {
    Vector<T> out(n_out);
    for (int i = 0; i < n_out; ++i) out(i) = components[static_cast<std::size_t>(i)].eval<T>(x);
    return out;
  }
  /// (this o inner)(x) = this(inner(x)).
  PolyMap compose(const PolyMap& inner) const;
};

using PolyVectorField = PolyMap;

/// Coordinates split as (base, fiber): the first base_dim coordinates span N,
/// the last fiber_dim coordinates are the fibers of the vertical distribution.
struct FiberSplit {
  int base_dim = 0;
  int fiber_dim = 0;
  int n() const { return base_dim + fiber_dim; }
  bool is_fiber(int i) const { return i >= base_dim; }
};

class PolyForm {
 public:
  PolyForm() = default;
  PolyForm(int n, int degree);
  static PolyForm from_alt(const AltFormQ& a);
  static PolyForm basis(int n, const MultiIndex& index, const Poly& coefficient);

  int dim() const { return n_; }
  int degree() const { return degree_; }
  std::size_t size() const { return coeffs_.size(); }
  std::vector<MultiIndex> indices() const { return combinations(n_, degree_); }
  const Poly& operator[](std::size_t i) const { return coeffs_[i]; }
  Poly& operator[](std::size_t i) { return coeffs_[i]; }
  const Poly& coeff(const MultiIndex& index) const { return coeffs_[rank_of(index)]; }
  Poly& coeff_ref(const MultiIndex& index) { return coeffs_[rank_of(index)]; }

  bool is_zero() const;
  /// True when every coefficient is a constant.
  bool is_constant() const;
  int max_poly_degree() const;

  template <class T>
  AltForm<T> eval_at(std::span<const T> x) const {
    if (static_cast<int>(x.size()) != n_) throw DimensionMismatch("eval_at: point dimension");
    Vector<T> c(static_cast<Eigen::Index>(coeffs_.size()));
    for (std::size_t i = 0; i < coeffs_.size(); ++i) c(static_cast<Eigen::Index>(i)) = coeffs_[i].eval<T>(x);
    return AltForm<T>(n_, degree_, std::move(c));
  }
  template <class T>
  AltForm<T> eval_at(const Vector<T>& x) const {
    return eval_at<T>(std::span<const T>(x.data(), static_cast<std::size_t>(x.size())));
  }

  PolyForm& operator+=(const PolyForm& o);
  PolyForm& operator-=(const PolyForm& o);
  PolyForm& operator*=(const Rational& s);
  friend PolyForm operator+(PolyForm a, const PolyForm& b) { return a += b; }
  friend PolyForm operator-(PolyForm a, const PolyForm& b) { return a -= b; }
  friend PolyForm operator-(PolyForm a) { return a *= Rational(-1); }
  friend PolyForm operator*(const Rational& s, PolyForm a) { return a *= s; }
  friend PolyForm operator*(const Poly& f, const PolyForm& a);
  friend bool operator==(const PolyForm& a, const PolyForm& b) = default;

 private:
  std::size_t rank_of(const MultiIndex& index) const;
  void check_same(const PolyForm& o) const;

  int n_ = 0;
  int degree_ = 0;
  std::vector<Poly> coeffs_;
};

/// Exterior derivative; throws for top-degree input.
PolyForm ext_d(const PolyForm& a);
bool is_closed(const PolyForm& a);
PolyForm wedge(const PolyForm& a, const PolyForm& b);
PolyForm contract_poly(const PolyVectorField& x, const PolyForm& a);
/// F^* a for F : R^m -> R^n and a a form on R^n.
PolyForm pullback_poly(const PolyMap& f, const PolyForm& a);

/// Pullback along x_N -> (x_N, 0): a form on R^{base_dim}.
PolyForm restrict_to_N(const PolyForm& a, const FiberSplit& split);
bool vanishes_on_N(const PolyForm& a, const FiberSplit& split);
/// Coefficients evaluated on N = {fiber = 0}, all differentials kept.
PolyForm coefficients_on_N(const PolyForm& a, const FiberSplit& split);
/// True when iota_{u ^ v} a = 0 for all fiber vectors u, v.
bool fiber_pairs_vanish(const PolyForm& a, const FiberSplit& split);

/// mu = int_0^1 H_t^* iota_{Y_t} a dt with H_t(x, y) = (x, t y), Y_t(x, y) = (0, y).
/// Requires a closed with vanishing pullback to N; then d mu = a and mu|_N = 0.
PolyForm homotopy_operator(const PolyForm& omega_prime, const FiberSplit& split);

struct Tautological {
  PolyForm theta;  // sum_I p_I dq^I
  PolyForm omega;  // -d theta
  FiberSplit split;
};

/// Multicotangent bundle Lambda^k T^* R^c with coordinates (q_1..q_c, p_I).
Tautological tautological_setup(int c, int k);

/// The section q -> (q, alpha_I(q)) of Lambda^k T^* R^c for a k-form alpha on R^c.
PolyMap section_map(const PolyForm& alpha);

/// Floating-point evaluator compiled from an exact form.
class CompiledPolyForm {
 public:
  CompiledPolyForm() = default;
  explicit CompiledPolyForm(const PolyForm& a);
  int dim() const { return n_; }
  int degree() const { return degree_; }
  AltFormD eval(const VectorD& x) const { return eval_as<double>(x); }

  template <class T>
  AltForm<T> eval_as(const Vector<T>& x) const {
    if (x.size() != n_) throw DimensionMismatch("CompiledPolyForm::eval: point dimension");
    Vector<T> c = Vector<T>::Zero(static_cast<Eigen::Index>(coeffs_.size()));
    for (std::size_t r = 0; r < coeffs_.size(); ++r) {
      T sum(0);
      for (const Term& t : coeffs_[r]) {
        T v = static_cast<T>(t.coeff);
        for (const auto& [i, p] : t.powers)
          for (int q = 0; q < p; ++q) v *= x(i);
        sum += v;
      }
      c(static_cast<Eigen::Index>(r)) = sum;
    }
    return AltForm<T>(n_, degree_, std::move(c));
  }

 private:
  struct Term {
    long double coeff;
    std::vector<std::pair<int, int>> powers;  // (variable, exponent)
  };
  int n_ = 0;
  int degree_ = 0;
  std::vector<std::vector<Term>> coeffs_;
};

}  // namespace mplectic
