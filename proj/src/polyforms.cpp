#include "mplectic/polyforms.hpp"

#include <cmath>

namespace mplectic {

// ---- Poly ------------------------------------------------------------------

Poly Poly::constant(int nvars, const Rational& c) {
  Poly p(nvars);
  p.add_term(Exponent(static_cast<std::size_t>(nvars), 0), c);
  return p;
}

Poly Poly::variable(int nvars, int i) {
  if (i < 0 || i >= nvars) throw DimensionMismatch("Poly::variable: index out of range");
  Exponent e(static_cast<std::size_t>(nvars), 0);
  e[static_cast<std::size_t>(i)] = 1;
  return monomial(nvars, std::move(e), Rational(1));
}

Poly Poly::monomial(int nvars, Exponent e, const Rational& c) {
  if (static_cast<int>(e.size()) != nvars) throw DimensionMismatch("Poly::monomial: exponent length");
  Poly p(nvars);
  p.add_term(e, c);
  return p;
}

int Poly::degree() const {
  int best = -1;
  for (const auto& [e, c] : terms_) {
    int d = 0;
    for (int x : e) d += x;
    best = std::max(best, d);
  }
  return best;
}

Rational Poly::constant_term() const {
  auto it = terms_.find(Exponent(static_cast<std::size_t>(nvars_), 0));
  return it == terms_.end() ? Rational(0) : it->second;
}

void Poly::add_term(const Exponent& e, const Rational& c) {
  if (static_cast<int>(e.size()) != nvars_) throw DimensionMismatch("Poly::add_term: exponent length");
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void Poly::check_same(const Poly& o) const {
  if (nvars_ != o.nvars_) throw DimensionMismatch("Poly: variable count mismatch");
}

Poly& Poly::operator+=(const Poly& o) {
  check_same(o);
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  check_same(o);
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Poly& Poly::operator*=(const Rational& s) {
  if (s.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, c] : terms_) c *= s;
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  a.check_same(b);
  Poly out(a.nvars_);
  Poly::Exponent e(static_cast<std::size_t>(a.nvars_));
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  return out;
}

Poly Poly::derivative(int i) const {
  if (i < 0 || i >= nvars_) throw DimensionMismatch("Poly::derivative: index out of range");
  Poly out(nvars_);
  for (const auto& [e, c] : terms_) {
    const int p = e[static_cast<std::size_t>(i)];
    if (p == 0) continue;
    Exponent f = e;
    --f[static_cast<std::size_t>(i)];
    out.add_term(f, c * p);
  }
  return out;
}

Poly Poly::pow(int e) const {
  if (e < 0) throw std::invalid_argument("Poly::pow: negative exponent");
  Poly result = constant(nvars_, Rational(1));
  Poly base = *this;
  while (e > 0) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

Poly Poly::substitute(const std::vector<Poly>& values) const {
  if (static_cast<int>(values.size()) != nvars_) throw DimensionMismatch("Poly::substitute: value count");
  const int m = values.empty() ? 0 : values.front().nvars();
  for (const auto& v : values)
    if (v.nvars() != m) throw DimensionMismatch("Poly::substitute: values disagree on variable count");
  Poly out(m);
  std::vector<std::vector<Poly>> powers(values.size());
  for (const auto& [e, c] : terms_) {
    Poly term = constant(m, c);
    for (std::size_t i = 0; i < e.size(); ++i) {
      const int p = e[i];
      if (p == 0) continue;
      auto& cache = powers[i];
      while (static_cast<int>(cache.size()) <= p) cache.push_back(cache.empty() ? constant(m, Rational(1)) : cache.back() * values[i]);
      term = term * cache[static_cast<std::size_t>(p)];
    }
    out += term;
  }
  return out;
}

Poly Poly::truncate_variables(int keep) const {
  if (keep < 0 || keep > nvars_) throw DimensionMismatch("Poly::truncate_variables: out of range");
  Poly out(keep);
  for (const auto& [e, c] : terms_) {
    bool vanishes = false;
    for (int i = keep; i < nvars_; ++i)
      if (e[static_cast<std::size_t>(i)] != 0) vanishes = true;
    if (vanishes) continue;
    out.add_term(Exponent(e.begin(), e.begin() + keep), c);
  }
  return out;
}

// ---- PolyMap ---------------------------------------------------------------

PolyMap PolyMap::identity(int n) {
  PolyMap f{n, n, {}};
  for (int i = 0; i < n; ++i) f.components.push_back(Poly::variable(n, i));
  return f;
}

PolyMap PolyMap::constant(int n_in, const VectorQ& value) {
  PolyMap f{n_in, static_cast<int>(value.size()), {}};
  for (Eigen::Index i = 0; i < value.size(); ++i) f.components.push_back(Poly::constant(n_in, value(i)));
  return f;
}

PolyMap PolyMap::compose(const PolyMap& inner) const {
  if (inner.n_out != n_in) throw DimensionMismatch("PolyMap::compose: dimension mismatch");
  PolyMap out{inner.n_in, n_out, {}};
  for (const auto& c : components) out.components.push_back(c.substitute(inner.components));
  return out;
}

// ---- PolyForm --------------------------------------------------------------

PolyForm::PolyForm(int n, int degree) : n_(n), degree_(degree) {
  if (n < 0 || n > kMaxDimension) throw std::invalid_argument("PolyForm: dimension out of range");
  // degree > n is allowed and stores no coefficients: the zero form
  if (degree < 0 || degree > kMaxDimension) throw std::invalid_argument("PolyForm: degree out of range");
  coeffs_.assign(binomial(n, degree), Poly(n));
}

PolyForm PolyForm::from_alt(const AltFormQ& a) {
  PolyForm out(a.dim(), a.degree());
  for (std::size_t i = 0; i < out.coeffs_.size(); ++i)
    out.coeffs_[i] = Poly::constant(a.dim(), a[static_cast<Eigen::Index>(i)]);
  return out;
}

PolyForm PolyForm::basis(int n, const MultiIndex& index, const Poly& coefficient) {
  PolyForm out(n, static_cast<int>(index.size()));
  out.coeff_ref(index) = coefficient;
  return out;
}

std::size_t PolyForm::rank_of(const MultiIndex& index) const {
  if (static_cast<int>(index.size()) != degree_) throw DimensionMismatch("PolyForm: multi-index length");
  if (!index.empty() && index.indices().back() >= n_) throw DimensionMismatch("PolyForm: index out of range");
  return index.rank(n_);
}

void PolyForm::check_same(const PolyForm& o) const {
  if (n_ != o.n_ || degree_ != o.degree_) throw DimensionMismatch("PolyForm: shape mismatch");
}

bool PolyForm::is_zero() const {
  for (const auto& c : coeffs_)
    if (!c.is_zero()) return false;
  return true;
}

bool PolyForm::is_constant() const { return max_poly_degree() <= 0; }

int PolyForm::max_poly_degree() const {
  int d = -1;
  for (const auto& c : coeffs_) d = std::max(d, c.degree());
  return d;
}

PolyForm& PolyForm::operator+=(const PolyForm& o) {
  check_same(o);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

PolyForm& PolyForm::operator-=(const PolyForm& o) {
  check_same(o);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

PolyForm& PolyForm::operator*=(const Rational& s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

PolyForm operator*(const Poly& f, const PolyForm& a) {
  PolyForm out = a;
  for (auto& c : out.coeffs_) c = f * c;
  return out;
}

// ---- exterior calculus -----------------------------------------------------

PolyForm ext_d(const PolyForm& a) {
  const int n = a.dim();
  if (a.degree() >= n) throw PreconditionError("ext_d: top-degree form");
  PolyForm out(n, a.degree() + 1);
  const auto idx = a.indices();
  for (std::size_t r = 0; r < idx.size(); ++r) {
    const Poly& f = a[r];
    if (f.is_zero()) continue;
    for (int i = 0; i < n; ++i) {
      if (idx[r].contains(i)) continue;
      Poly df = f.derivative(i);
      if (df.is_zero()) continue;
      MultiIndex merged;
      const int s = merge_sign(MultiIndex{i}, idx[r], &merged);
      if (s < 0) df *= Rational(-1);
      out.coeff_ref(merged) += df;
    }
  }
  return out;
}

PolyForm wedge(const PolyForm& a, const PolyForm& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("wedge: dimension mismatch");
  const int n = a.dim();
  if (a.degree() + b.degree() > n) throw PreconditionError("wedge: degree exceeds dimension");
  PolyForm out(n, a.degree() + b.degree());
  const auto ia = a.indices();
  const auto ib = b.indices();
  for (std::size_t i = 0; i < ia.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < ib.size(); ++j) {
      if (b[j].is_zero()) continue;
      MultiIndex merged;
      const int s = merge_sign(ia[i], ib[j], &merged);
      if (s == 0) continue;
      Poly prod = a[i] * b[j];
      if (s < 0) prod *= Rational(-1);
      out.coeff_ref(merged) += prod;
    }
  }
  return out;
}

PolyForm contract_poly(const PolyVectorField& x, const PolyForm& a) {
  if (x.n_out != a.dim() || x.n_in != a.dim()) throw DimensionMismatch("contract_poly: dimension mismatch");
  if (a.degree() == 0) throw PreconditionError("contract_poly: degree-0 form");
  PolyForm out(a.dim(), a.degree() - 1);
  const auto idx = a.indices();
  for (std::size_t r = 0; r < idx.size(); ++r) {
    if (a[r].is_zero()) continue;
    for (std::size_t s = 0; s < idx[r].size(); ++s) {
      const Poly& xi = x.components[static_cast<std::size_t>(idx[r][s])];
      if (xi.is_zero()) continue;
      Poly term = xi * a[r];
      if (s % 2 == 1) term *= Rational(-1);
      out.coeff_ref(idx[r].without(idx[r][s])) += term;
    }
  }
  return out;
}

PolyForm pullback_poly(const PolyMap& f, const PolyForm& a) {
  if (f.n_out != a.dim()) throw DimensionMismatch("pullback_poly: dimension mismatch");
  const int m = f.n_in;
  const int p = a.degree();
  if (p > m) throw PreconditionError("pullback_poly: degree exceeds source dimension");
  // dF^i as one-forms on R^m
  std::vector<PolyForm> dfi;
  for (const auto& comp : f.components) {
    PolyForm one(m, 1);
    for (int j = 0; j < m; ++j) one[static_cast<std::size_t>(j)] = comp.derivative(j);
    dfi.push_back(std::move(one));
  }
  PolyForm out(m, p);
  const auto idx = a.indices();
  for (std::size_t r = 0; r < idx.size(); ++r) {
    if (a[r].is_zero()) continue;
    PolyForm term(m, 0);
    term[0] = a[r].substitute(f.components);
    for (int i : idx[r]) {
      if (term.is_zero()) break;
      term = wedge(term, dfi[static_cast<std::size_t>(i)]);
    }
    if (!term.is_zero()) out += term;
  }
  return out;
}

PolyForm restrict_to_N(const PolyForm& a, const FiberSplit& split) {
  if (split.n() != a.dim()) throw DimensionMismatch("restrict_to_N: split does not match dimension");
  const int c = split.base_dim;
  PolyForm out(c, a.degree());
  const auto idx = a.indices();
  for (std::size_t r = 0; r < idx.size(); ++r) {
    if (!idx[r].empty() && split.is_fiber(idx[r].indices().back())) continue;
    out.coeff_ref(idx[r]) = a[r].truncate_variables(c);
  }
  return out;
}

PolyForm coefficients_on_N(const PolyForm& a, const FiberSplit& split) {
  if (split.n() != a.dim()) throw DimensionMismatch("coefficients_on_N: split does not match dimension");
  PolyForm out(a.dim(), a.degree());
  std::vector<Poly> sub;
  for (int i = 0; i < a.dim(); ++i)
    sub.push_back(split.is_fiber(i) ? Poly(a.dim()) : Poly::variable(a.dim(), i));
  for (std::size_t r = 0; r < a.size(); ++r) out[r] = a[r].substitute(sub);
  return out;
}

bool is_closed(const PolyForm& a) { return a.degree() == a.dim() || ext_d(a).is_zero(); }

bool vanishes_on_N(const PolyForm& a, const FiberSplit& split) {
  return a.degree() > split.base_dim || restrict_to_N(a, split).is_zero();
}

bool fiber_pairs_vanish(const PolyForm& a, const FiberSplit& split) {
  if (split.n() != a.dim()) throw DimensionMismatch("fiber_pairs_vanish: split does not match dimension");
  const auto idx = a.indices();
  for (std::size_t r = 0; r < idx.size(); ++r) {
    int fibers = 0;
    for (int i : idx[r])
      if (split.is_fiber(i)) ++fibers;
    if (fibers >= 2 && !a[r].is_zero()) return false;
  }
  return true;
}

PolyForm homotopy_operator(const PolyForm& omega_prime, const FiberSplit& split) {
  const int n = omega_prime.dim();
  if (split.n() != n || split.base_dim < 0 || split.fiber_dim < 0)
    throw DimensionMismatch("homotopy_operator: split does not match dimension");
  if (omega_prime.degree() == 0) throw PreconditionError("homotopy_operator: degree-0 input");
  if (!is_closed(omega_prime)) throw PreconditionError("homotopy_operator: input is not closed");
  if (!vanishes_on_N(omega_prime, split))
    throw PreconditionError("homotopy_operator: input does not vanish on N");

  PolyForm mu(n, omega_prime.degree() - 1);
  const auto idx = omega_prime.indices();
  for (std::size_t r = 0; r < idx.size(); ++r) {
    const Poly& f = omega_prime[r];
    if (f.is_zero()) continue;
    const MultiIndex& index = idx[r];
    int fibers_in_index = 0;
    for (int i : index)
      if (split.is_fiber(i)) ++fibers_in_index;
    for (std::size_t s = 0; s < index.size(); ++s) {
      const int a = index[s];
      if (!split.is_fiber(a)) continue;
      Poly& target = mu.coeff_ref(index.without(a));
      // Y_t supplies y_a in slot s; the other fiber differentials each carry t,
      // and f(x, t y) carries t^{|beta|}: integrate t^{|beta| + m - 1} over [0, 1].
      for (const auto& [e, c] : f.terms()) {
        int fiber_degree = 0;
        for (int i = split.base_dim; i < n; ++i) fiber_degree += e[static_cast<std::size_t>(i)];
        Poly::Exponent shifted = e;
        ++shifted[static_cast<std::size_t>(a)];
        Rational coeff = c / Rational(fiber_degree + fibers_in_index);
        if (s % 2 == 1) coeff = -coeff;
        Poly term = Poly::monomial(n, shifted, coeff);
        target += term;
      }
    }
  }
  return mu;
}

Tautological tautological_setup(int c, int k) {
  if (k < 1 || c <= k) throw PreconditionError("tautological_setup requires c > k >= 1");
  const int d = static_cast<int>(binomial(c, k));
  const int n = c + d;
  Tautological out{PolyForm(n, k), PolyForm(n, k + 1), FiberSplit{c, d}};
  int r = 0;
  for (const MultiIndex& index : combinations(c, k)) {
    out.theta.coeff_ref(index) = Poly::variable(n, c + r);
    ++r;
  }
  out.omega = -ext_d(out.theta);
  return out;
}

PolyMap section_map(const PolyForm& alpha) {
  const int c = alpha.dim();
  PolyMap f{c, c + static_cast<int>(alpha.size()), {}};
  for (int i = 0; i < c; ++i) f.components.push_back(Poly::variable(c, i));
  for (std::size_t r = 0; r < alpha.size(); ++r) f.components.push_back(alpha[r]);
  return f;
}

// ---- CompiledPolyForm ------------------------------------------------------

CompiledPolyForm::CompiledPolyForm(const PolyForm& a) : n_(a.dim()), degree_(a.degree()) {
  coeffs_.resize(a.size());
  for (std::size_t r = 0; r < a.size(); ++r)
    for (const auto& [e, c] : a[r].terms()) {
      Term t{c.convert_to<long double>(), {}};
      for (int i = 0; i < n_; ++i)
        if (e[static_cast<std::size_t>(i)] != 0) t.powers.emplace_back(i, e[static_cast<std::size_t>(i)]);
      coeffs_[r].push_back(std::move(t));
    }
}

}  // namespace mplectic
