#pragma once

// Standard k-plectic structure: the distinguished subspace W, the contraction
// isomorphism chi : W -> Lambda^k (V/W)^*, Lagrangian complements and the
// linear normal form omega = gamma^* omega_can.

#include "mplectic/subspace.hpp"

#include <algorithm>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace mplectic {

template <class T>
struct StandardStructure {
  AltForm<T> omega;
  Subspace<T> W;
  Subspace<T> complement;  // coordinate complement realizing V/W
  int k = 0;
  int c = 0;  // codim W
  int d = 0;  // dim W
  /// Column j = chi(w_j) for the j-th RREF row of W; row r = value on the
  /// r-th lexicographic k-tuple of the complement basis.
  Matrix<T> chi_matrix;
};

enum class StandardCondition { PairwiseNull, Dimension, Codimension, ChiSingular };

inline const char* to_string(StandardCondition c) {
  switch (c) {
    case StandardCondition::PairwiseNull: return "pairwise-null";
    case StandardCondition::Dimension: return "dimension";
    case StandardCondition::Codimension: return "codimension";
    case StandardCondition::ChiSingular: return "chi-singular";
  }
  return "?";
}

template <class T>
struct StandardViolation {
  StandardCondition condition;
  std::string message;
  std::vector<Vector<T>> witness;  // violating pair for the pairwise-null condition
};

template <class T>
using StandardCheck = std::variant<StandardStructure<T>, StandardViolation<T>>;

namespace detail {

// out[J] = a(b_{j_1}, ..., b_{j_p}) by contracting one basis row at a time; tuples sharing a
// prefix share the partial contraction.
template <class T>
void restrict_rec(const AltForm<T>& partial, const Matrix<T>& basis, int start, std::vector<int>& prefix,
                  AltForm<T>& out) {
  if (partial.degree() == 0) {
    out.coeff_ref(MultiIndex(prefix)) = partial[0];
    return;
  }
  for (int j = start; j < static_cast<int>(basis.rows()); ++j) {
    prefix.push_back(j);
    restrict_rec(contract(Vector<T>(basis.row(j).transpose()), partial), basis, j + 1, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace detail

/// Pullback of `a` along the inclusion spanned by the rows of `basis`:
/// the form (v_1..v_p) -> a(B^T v_1, ..., B^T v_p) on R^{rows}.
template <class T>
AltForm<T> restrict_form(const AltForm<T>& a, const Matrix<T>& basis) {
  if (basis.cols() != a.dim()) throw DimensionMismatch("restrict_form: basis length");
  const int m = static_cast<int>(basis.rows());
  const int p = a.degree();
  if (p > m) throw PreconditionError("restrict_form: degree exceeds subspace dimension");
  AltForm<T> out(m, p);
  std::vector<int> prefix;
  detail::restrict_rec(a, basis, 0, prefix, out);
  return out;
}

/// Matrix of w -> (iota_w omega) restricted to span(l_basis), columns over
/// the rows of w_basis.
template <class T>
Matrix<T> contraction_matrix(const AltForm<T>& omega, const Matrix<T>& w_basis, const Matrix<T>& l_basis) {
  const int k = omega.degree() - 1;
  Matrix<T> m(static_cast<Eigen::Index>(binomial(static_cast<int>(l_basis.rows()), k)), w_basis.rows());
  for (Eigen::Index j = 0; j < w_basis.rows(); ++j) {
    const Vector<T> w = w_basis.row(j).transpose();
    m.col(j) = restrict_form(contract(w, omega), l_basis).coeffs();
  }
  return m;
}

/// The unique c > k with c + C(c,k) = n, if any.
inline std::optional<int> solve_codim(int n, int k) {
  if (n < 2 || k < 2) return std::nullopt;
  for (int c = k + 1; c + static_cast<int>(binomial(c, k)) <= n; ++c)
    if (c + static_cast<int>(binomial(c, k)) == n) return c;
  return std::nullopt;
}

namespace detail {

template <class T>
int checked_k(const AltForm<T>& omega) {
  const int k = omega.degree() - 1;
  if (k == 1) throw PreconditionError("standard structure requires k > 1 (k = 1 is the symplectic case)");
  if (k < 1) throw PreconditionError("standard structure requires a form of degree >= 3");
  if (!is_nondegenerate(omega)) throw PreconditionError("omega is degenerate");
  return k;
}

}  // namespace detail

/// Checks conditions (1)-(3) of a standard k-plectic structure and builds chi.
template <class T>
StandardCheck<T> verify_standard(const AltForm<T>& omega, const Subspace<T>& W) {
  if (W.ambient() != omega.dim()) throw DimensionMismatch("verify_standard: ambient dimension mismatch");
  const int k = detail::checked_k(omega);
  const int n = omega.dim();
  const auto basis = W.basis_vectors();
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i + 1; j < basis.size(); ++j) {
      std::vector<Vector<T>> pair{basis[i], basis[j]};
      if (!multi_contract(pair, omega).is_zero()) {
        std::ostringstream msg;
        msg << "iota_{u^v} omega != 0 for W basis vectors " << i + 1 << " and " << j + 1;
        return StandardViolation<T>{StandardCondition::PairwiseNull, msg.str(), pair};
      }
    }
  const int d = W.dim();
  const int c = n - d;
  if (static_cast<std::size_t>(d) != binomial(c, k)) {
    std::ostringstream msg;
    msg << "dim W = " << d << " but C(codim W, k) = C(" << c << "," << k << ") = " << binomial(c, k);
    return StandardViolation<T>{StandardCondition::Dimension, msg.str(), {}};
  }
  if (c <= k) {
    std::ostringstream msg;
    msg << "codim W = " << c << " is not > k = " << k;
    return StandardViolation<T>{StandardCondition::Codimension, msg.str(), {}};
  }
  StandardStructure<T> s;
  s.omega = omega;
  s.W = W;
  s.complement = complement_of(W);
  s.k = k;
  s.c = c;
  s.d = d;
  s.chi_matrix = contraction_matrix(omega, W.basis(), s.complement.basis());
  if (rank<T>(s.chi_matrix) != d)
    return StandardViolation<T>{StandardCondition::ChiSingular, "chi is not invertible", {}};
  return s;
}

/// Rank of u -> iota_u iota_v omega is at most c exactly on W (for standard omega).
template <class T>
bool rank_test_vector(const AltForm<T>& omega, int c, const Vector<T>& v) {
  if (v.size() != omega.dim()) throw DimensionMismatch("rank_test_vector: vector length");
  bool zero = true;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (!ScalarTraits<T>::is_zero(v(i))) zero = false;
  if (zero) throw PreconditionError("rank_test_vector: zero vector");
  return sharp_rank(contract(v, omega)) <= c;
}

template <class T>
struct FindWOptions {
  std::vector<Vector<T>> hint_vectors;
  std::vector<Subspace<T>> hint_subspaces;
  /// Small-integer pool: entries in [-bound, bound], at most `max_support` nonzeros.
  int small_int_bound = 1;
  int max_support = 3;
  int max_rounds = 8;
  /// When set, the pool is shuffled with this seed (hints stay first).
  std::optional<unsigned> shuffle_seed;
};

template <class T>
struct WFound {
  StandardStructure<T> structure;
  std::vector<std::string> log;
};
struct WNotStandardByDimension {
  int n = 0;
  int k = 0;
};
struct WNotFound {
  std::vector<std::string> log;
};

template <class T>
using WSearchOutcome = std::variant<WFound<T>, WNotStandardByDimension, WNotFound>;

/// Vectors of length m with entries in [-bound, bound], support in [1, max_support],
/// first nonzero entry positive; ordered by support size, then support, then values.
template <class T>
std::vector<Vector<T>> small_integer_vectors(int m, int bound, int max_support) {
  std::vector<Vector<T>> out;
  for (int s = 1; s <= std::min(max_support, m); ++s) {
    for (const MultiIndex& support : combinations(m, s)) {
      std::vector<int> vals(static_cast<std::size_t>(s), -bound);
      vals[0] = 1;
      while (true) {
        Vector<T> v = Vector<T>::Zero(m);
        for (int i = 0; i < s; ++i) v(support[static_cast<std::size_t>(i)]) = T(vals[static_cast<std::size_t>(i)]);
        out.push_back(v);
        // odometer over nonzero values; first entry stays in [1, bound]
        int i = s - 1;
        for (; i >= 0; --i) {
          int& x = vals[static_cast<std::size_t>(i)];
          const int lo = (i == 0) ? 1 : -bound;
          x = (x == -1) ? 1 : x + 1;
          if (x > bound) {
            x = lo;
            continue;
          }
          break;
        }
        if (i < 0) break;
      }
    }
  }
  return out;
}

/// Semi-decision procedure for W. A Found result always passed verify_standard,
/// and W is unique when it exists, so Found does not depend on the pool order.
template <class T>
WSearchOutcome<T> find_w(const AltForm<T>& omega, const FindWOptions<T>& options = {}) {
  const int k = detail::checked_k(omega);
  const int n = omega.dim();
  const auto c_opt = solve_codim(n, k);
  if (!c_opt) return WNotStandardByDimension{n, k};
  const int c = *c_opt;
  const int d = n - c;
  std::vector<std::string> log;
  auto note = [&log](const std::string& s) { log.push_back(s); };

  auto try_verify = [&](const Subspace<T>& candidate, const std::string& what) -> std::optional<StandardStructure<T>> {
    if (candidate.dim() != d) return std::nullopt;
    auto check = verify_standard(omega, candidate);
    if (auto* s = std::get_if<StandardStructure<T>>(&check)) {
      note(what + ": verified");
      return *s;
    }
    note(what + ": rejected (" + std::get<StandardViolation<T>>(check).message + ")");
    return std::nullopt;
  };

  std::vector<Vector<T>> pool;
  for (const auto& h : options.hint_subspaces) {
    if (h.ambient() != n) throw DimensionMismatch("find_w: hint dimension");
    if (auto s = try_verify(h, "hint subspace")) return WFound<T>{*s, log};
    for (const auto& v : h.basis_vectors()) pool.push_back(v);
  }
  for (const auto& v : options.hint_vectors) {
    if (v.size() != n) throw DimensionMismatch("find_w: hint dimension");
    pool.push_back(v);
  }
  const std::size_t hint_count = pool.size();
  for (auto& v : small_integer_vectors<T>(n, std::max(1, options.small_int_bound), std::max(2, options.max_support)))
    pool.push_back(std::move(v));
  if (options.shuffle_seed) {
    std::mt19937 rng(*options.shuffle_seed);
    std::shuffle(pool.begin() + static_cast<std::ptrdiff_t>(hint_count), pool.end(), rng);
  }

  std::vector<Vector<T>> accepted;
  Subspace<T> accepted_span = Subspace<T>::zero(n);
  Subspace<T> region = Subspace<T>::full(n);

  for (int round = 0; round < options.max_rounds; ++round) {
    std::vector<Vector<T>> candidates;
    for (const auto& v : pool)
      if (region.contains(v)) candidates.push_back(v);
    if (region.dim() < n)
      for (const auto& q : small_integer_vectors<T>(region.dim(), std::max(1, options.small_int_bound), std::max(2, options.max_support)))
        candidates.push_back(region.basis().transpose() * q);
    bool progress = false;
    for (const auto& v : candidates) {
      if (!region.contains(v) || accepted_span.contains(v)) continue;
      if (!rank_test_vector(omega, c, v)) continue;
      accepted.push_back(v);
      accepted_span = Subspace<T>::span(n, accepted);
      region = intersection(region, Subspace<T>::kernel(sharp_matrix(contract(v, omega))));
      progress = true;
      std::ostringstream msg;
      msg << "round " << round << ": accepted candidate, span dim " << accepted_span.dim() << ", region dim " << region.dim();
      note(msg.str());
      if (accepted_span.dim() == d) {
        if (auto s = try_verify(accepted_span, "accepted span")) return WFound<T>{*s, log};
        return WNotFound{log};
      }
      if (region.dim() == d) {
        if (auto s = try_verify(region, "kernel intersection")) return WFound<T>{*s, log};
        return WNotFound{log};
      }
      if (region.dim() < d) {
        note("kernel intersection dropped below dim W");
        return WNotFound{log};
      }
    }
    if (!progress) {
      std::ostringstream msg;
      msg << "round " << round << ": no new candidate passed the rank test (" << candidates.size() << " scanned)";
      note(msg.str());
      break;
    }
  }
  return WNotFound{log};
}

/// A k-Lagrangian complement L = {v + A v : v in Ltilde} of W, A = chi^{-1} o (-T/(k+1)).
template <class T>
Subspace<T> lagrangian_complement(const StandardStructure<T>& s, const Subspace<T>& ltilde) {
  if (!are_complementary(s.W, ltilde)) throw PreconditionError("lagrangian_complement: Ltilde is not a complement of W");
  const Matrix<T>& lb = ltilde.basis();
  const Matrix<T> chi = contraction_matrix(s.omega, s.W.basis(), lb);
  const Matrix<T> t_map = contraction_matrix(s.omega, lb, lb);
  const Matrix<T> phi = t_map * (T(-1) / T(s.k + 1));
  const auto chi_inv = inverse<T>(chi);
  if (!chi_inv) throw PreconditionError("lagrangian_complement: chi is singular");
  const Matrix<T> a = *chi_inv * phi;  // column i = coordinates of A(l_i) in the W basis
  Matrix<T> rows = lb + a.transpose() * s.W.basis();
  return Subspace<T>::span(rows);
}

/// Matrix of gamma = id_L + chi : V -> L + Lambda^k(L^*), in the coordinates of
/// canonical_form(c, k) with L identified with R^c through its RREF basis.
template <class T>
Matrix<T> gamma(const StandardStructure<T>& s, const Subspace<T>& l) {
  if (!are_complementary(s.W, l)) throw PreconditionError("gamma: L is not a complement of W");
  if (!is_lagrangian(s.omega, l, s.k)) throw PreconditionError("gamma: L is not k-Lagrangian");
  const int n = s.omega.dim();
  Matrix<T> b(n, n);
  b << l.basis(), s.W.basis();
  const auto bt_inv = inverse<T>(Matrix<T>(b.transpose()));
  if (!bt_inv) throw PreconditionError("gamma: L + W does not span V");
  const Matrix<T>& coords = *bt_inv;  // column j = coordinates of e_j in the basis (L rows, W rows)
  const Matrix<T> chi = contraction_matrix(s.omega, s.W.basis(), l.basis());
  Matrix<T> g(n, n);
  g.topRows(s.c) = coords.topRows(s.c);
  g.bottomRows(s.d) = chi * coords.bottomRows(s.d);
  return g;
}

/// omega_can = sum_I dp_I ^ dq^I on R^{c + C(c,k)}; q are the first c
/// coordinates, p_I follow in lexicographic order of I.
template <class T>
AltForm<T> canonical_form(int c, int k) {
  if (k < 2 || c <= k) throw PreconditionError("canonical_form requires c > k >= 2");
  const int d = static_cast<int>(binomial(c, k));
  const int n = c + d;
  AltForm<T> out(n, k + 1);
  int r = 0;
  for (const MultiIndex& index : combinations(c, k)) {
    std::vector<int> full{c + r};
    full.insert(full.end(), index.begin(), index.end());
    const int sign = sort_with_sign(full);
    out.coeff_ref(MultiIndex(full)) += T(sign);
    ++r;
  }
  return out;
}

template <class T>
Subspace<T> fiber_summand(int c, int k) {
  const int n = c + static_cast<int>(binomial(c, k));
  std::vector<int> idx;
  for (int i = c; i < n; ++i) idx.push_back(i);
  return Subspace<T>::coordinate(n, idx);
}

template <class T>
Subspace<T> base_summand(int c, int k) {
  const int n = c + static_cast<int>(binomial(c, k));
  std::vector<int> idx;
  for (int i = 0; i < c; ++i) idx.push_back(i);
  return Subspace<T>::coordinate(n, idx);
}

/// p_1^* eta - p_2^* eta on R^n x R^n.
template <class T>
AltForm<T> product_form(const AltForm<T>& eta) {
  const int n = eta.dim();
  AltForm<T> out(2 * n, eta.degree());
  Eigen::Index r = 0;
  for (const MultiIndex& index : eta.indices()) {
    const T& c = eta[r++];
    if (ScalarTraits<T>::is_zero(c)) continue;
    std::vector<int> shifted;
    for (int i : index) shifted.push_back(i + n);
    out.coeff_ref(index) += c;
    out.coeff_ref(MultiIndex(shifted)) -= c;
  }
  return out;
}

/// Graph {(u, A u)} of A inside R^n x R^n.
template <class T>
Subspace<T> graph_subspace(const Matrix<T>& a) {
  const Eigen::Index n = a.rows();
  Matrix<T> rows(n, 2 * n);
  rows << Matrix<T>::Identity(n, n), a.transpose();
  return Subspace<T>::span(rows);
}

template <class T>
bool graph_is_lagrangian(const AltForm<T>& eta, const Matrix<T>& a) {
  if (a.rows() != eta.dim() || a.cols() != eta.dim()) throw DimensionMismatch("graph_is_lagrangian: shape mismatch");
  if (rank<T>(a) < a.rows()) throw PreconditionError("graph_is_lagrangian: singular map");
  return is_lagrangian(product_form(eta), graph_subspace(a), eta.degree() - 1);
}

/// Cartan 3-form omega(x, y, z) = kappa([x, y], z) of a Lie algebra given by
/// structure constants [e_i, e_j] = sum_l C(i, j, l) e_l stored at (i*dim + j)*dim + l.
template <class T>
AltForm<T> cartan_form(const std::vector<T>& constants, int dim) {
  if (static_cast<int>(constants.size()) != dim * dim * dim) throw DimensionMismatch("cartan_form: constants size");
  auto C = [&](int i, int j, int l) -> const T& { return constants[static_cast<std::size_t>((i * dim + j) * dim + l)]; };
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int l = 0; l < dim; ++l)
        if (!ScalarTraits<T>::is_zero(C(i, j, l) + C(j, i, l)))
          throw PreconditionError("cartan_form: structure constants are not antisymmetric");
  // [[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j] = 0
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k)
        for (int l = 0; l < dim; ++l) {
          T acc(0);
          for (int m = 0; m < dim; ++m) acc += C(i, j, m) * C(m, k, l) + C(j, k, m) * C(m, i, l) + C(k, i, m) * C(m, j, l);
          if (!ScalarTraits<T>::is_zero(acc)) throw PreconditionError("cartan_form: Jacobi identity fails");
        }
  Matrix<T> killing = Matrix<T>::Zero(dim, dim);
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b)
      for (int x = 0; x < dim; ++x)
        for (int y = 0; y < dim; ++y) killing(a, b) += C(a, x, y) * C(b, y, x);
  AltForm<T> out(dim, 3);
  for (const MultiIndex& index : out.indices()) {
    T v(0);
    for (int m = 0; m < dim; ++m) v += C(index[0], index[1], m) * killing(m, index[2]);
    out.coeff_ref(index) = v;
  }
  return out;
}

/// Structure constants of so(3): [e_i, e_j] = eps_{ijl} e_l.
template <class T>
std::vector<T> so3_structure_constants() {
  std::vector<T> c(27, T(0));
  auto set = [&](int i, int j, int l, int v) { c[static_cast<std::size_t>((i * 3 + j) * 3 + l)] = T(v); };
  set(0, 1, 2, 1); set(1, 0, 2, -1);
  set(1, 2, 0, 1); set(2, 1, 0, -1);
  set(2, 0, 1, 1); set(0, 2, 1, -1);
  return c;
}

}  // namespace mplectic
