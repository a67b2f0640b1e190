#include "mplectic/moser.hpp"

#include "mplectic/standard.hpp"
#include "mplectic/subspace.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <random>

namespace mplectic {

Box Box::symmetric(int n, double half_width) {
  if (half_width <= 0.0) throw PreconditionError("Box: half width must be positive");
  return Box{std::vector<double>(static_cast<std::size_t>(n), -half_width),
             std::vector<double>(static_cast<std::size_t>(n), half_width)};
}

bool Box::contains(const VectorD& x, double slack) const {
  if (x.size() != dim()) throw DimensionMismatch("Box::contains: point dimension");
  for (int i = 0; i < dim(); ++i)
    if (x(i) < lower[static_cast<std::size_t>(i)] - slack || x(i) > upper[static_cast<std::size_t>(i)] + slack)
      return false;
  return true;
}

VectorD Box::center() const {
  VectorD c(dim());
  for (int i = 0; i < dim(); ++i) c(i) = 0.5 * (lower[static_cast<std::size_t>(i)] + upper[static_cast<std::size_t>(i)]);
  return c;
}

namespace {

VectorQ project_to_L(const VectorD& x, const FiberSplit& split) {
  VectorQ q = VectorQ::Zero(x.size());
  for (int i = 0; i < split.base_dim; ++i) q(i) = Rational(x(i));
  return q;
}

}  // namespace

void validate(const MoserProblem& p) {
  const int n = p.dim();
  if (p.omega_tilde.dim() != n || p.omega_tilde.degree() != p.omega.degree())
    throw DimensionMismatch("moser: omega and omega_tilde differ in shape");
  if (p.split.n() != n) throw DimensionMismatch("moser: split does not match dimension");
  if (p.box.dim() != n) throw DimensionMismatch("moser: box does not match dimension");
  if (!(p.step > 0.0 && p.step <= 1.0)) throw PreconditionError("moser: step must lie in (0, 1]");
  for (const auto& x : p.samples)
    if (x.size() != n) throw DimensionMismatch("moser: sample dimension");
  const int k = p.k();
  if (k < 2) throw PreconditionError("moser: degree must be at least 3");
  if (static_cast<std::uint64_t>(p.split.fiber_dim) != binomial(p.split.base_dim, k))
    throw PreconditionError("moser: fiber dimension must be C(base, k)");
  if (!is_closed(p.omega)) throw PreconditionError("moser: omega is not closed");
  if (!is_closed(p.omega_tilde)) throw PreconditionError("moser: omega_tilde is not closed");
  const PolyForm diff = p.omega_tilde - p.omega;
  if (!coefficients_on_N(diff, p.split).is_zero())
    throw PreconditionError("moser: omega and omega_tilde differ along L");
  if (!fiber_pairs_vanish(diff, p.split))
    throw PreconditionError("moser: omega_tilde - omega has a nonzero fiber-fiber component");
  std::vector<int> fiber;
  for (int i = p.split.base_dim; i < n; ++i) fiber.push_back(i);
  const AltFormQ at_L = p.omega.eval_at<Rational>(project_to_L(p.box.center(), p.split));
  if (!std::holds_alternative<StandardStructure<Rational>>(verify_standard(at_L, SubspaceQ::coordinate(n, fiber))))
    throw PreconditionError("moser: the fiber summand is not standard for omega on L");
}

PolyForm moser_path(const MoserProblem& p, const Rational& t) {
  if (t < 0 || t > 1) throw PreconditionError("moser_path: t outside [0, 1]");
  return p.omega + t * (p.omega_tilde - p.omega);
}

PolyForm moser_mu(const MoserProblem& p) { return homotopy_operator(p.omega_tilde - p.omega, p.split); }

MoserField::MoserField(const MoserProblem& p)
    : problem_(&p),
      omega_prime_(p.omega_tilde - p.omega),
      mu_(moser_mu(p)),
      omega_d_(p.omega),
      omega_prime_d_(omega_prime_),
      mu_d_(mu_) {
  const int n = p.dim();
  for (const MultiIndex& index : combinations(p.split.base_dim, p.k()))
    base_rows_.push_back(static_cast<Eigen::Index>(index.rank(n)));
}

template <class T>
AltForm<T> MoserField::omega_t_generic(const T& t, const Vector<T>& x) const {
  if constexpr (ScalarTraits<T>::exact) {
    return problem_->omega.eval_at<T>(x) + t * omega_prime_.eval_at<T>(x);
  } else {
    return omega_d_.eval_as<T>(x) + t * omega_prime_d_.eval_as<T>(x);
  }
}

AltFormD MoserField::omega_t(double t, const VectorD& x) const { return omega_t_generic(t, x); }

template <class T>
Matrix<T> MoserField::system_matrix(const T& t, const Vector<T>& x) const {
  const FiberSplit& split = problem_->split;
  const Matrix<T> sharp = sharp_matrix(omega_t_generic(t, x));
  const auto d = static_cast<Eigen::Index>(split.fiber_dim);
  Matrix<T> m(d, d);
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index a = 0; a < d; ++a) m(r, a) = sharp(base_rows_[static_cast<std::size_t>(r)], split.base_dim + a);
  return m;
}

template <class T>
Vector<T> MoserField::operator()(const T& t, const Vector<T>& x) const {
  const FiberSplit& split = problem_->split;
  const int n = split.n();
  if (x.size() != n) throw DimensionMismatch("moser_field: point dimension");
  AltForm<T> mu;
  if constexpr (ScalarTraits<T>::exact)
    mu = mu_.eval_at<T>(x);
  else
    mu = mu_d_.eval_as<T>(x);
  Vector<T> out = Vector<T>::Zero(n);
  if (mu.is_zero()) return out;
  Vector<T> rhs(split.fiber_dim);
  for (int r = 0; r < split.fiber_dim; ++r) rhs(r) = -mu[base_rows_[static_cast<std::size_t>(r)]];
  const auto sol = solve<T>(system_matrix(t, x), rhs);
  if (!sol) throw FlowError("moser_field: singular system, point outside the certified neighborhood");
  out.tail(split.fiber_dim) = *sol;
  return out;
}

template Matrix<Rational> MoserField::system_matrix(const Rational&, const VectorQ&) const;
template Matrix<double> MoserField::system_matrix(const double&, const VectorD&) const;
template VectorQ MoserField::operator()(const Rational&, const VectorQ&) const;
template VectorD MoserField::operator()(const double&, const VectorD&) const;
template Vector<long double> MoserField::operator()(const long double&, const Vector<long double>&) const;

namespace {

using VectorE = Vector<long double>;
using MatrixE = Matrix<long double>;

int step_count(const MoserProblem& p) { return std::max(1, static_cast<int>(std::lround(1.0 / p.step))); }

// RK4 for a base trajectory x and trajectories x + e_j carried as offsets e_j
// (columns of `offsets`). Offsets never pass through the rounding of the base
// state, which keeps difference quotients of the flow free of cancellation.
// Extended precision throughout.
VectorE rk4_with_offsets(const MoserField& field, VectorE x, MatrixE& offsets) {
  const MoserProblem& p = field.problem();
  const int steps = step_count(p);
  const long double h = 1.0L / steps;
  const auto m = offsets.cols();
  auto check = [&](const VectorE& y) {
    if (!p.box.contains(y.cast<double>())) throw FlowError("integrate_flow: trajectory left the box");
  };
  // field at base point y and differences at y + e_j
  auto eval = [&](long double t, const VectorE& y, const MatrixE& e, VectorE& k, MatrixE& ke) {
    check(y);
    k = field(t, y);
    for (Eigen::Index j = 0; j < m; ++j) {
      const VectorE yj = y + e.col(j);
      check(yj);
      ke.col(j) = field(t, yj) - k;
    }
  };
  const auto n = x.size();
  VectorE k1(n), k2(n), k3(n), k4(n);
  MatrixE e1(n, m), e2(n, m), e3(n, m), e4(n, m);
  for (int s = 0; s < steps; ++s) {
    const long double t = s * h;
    eval(t, x, offsets, k1, e1);
    eval(t + h / 2, x + (h / 2) * k1, offsets + (h / 2) * e1, k2, e2);
    eval(t + h / 2, x + (h / 2) * k2, offsets + (h / 2) * e2, k3, e3);
    eval(t + h, x + h * k3, offsets + h * e3, k4, e4);
    x += (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
    offsets += (h / 6) * (e1 + 2 * e2 + 2 * e3 + e4);
  }
  check(x);
  for (Eigen::Index j = 0; j < m; ++j) check(x + offsets.col(j));
  return x;
}

}  // namespace

VectorD flow_map(const MoserField& field, const VectorD& x0) {
  MatrixE none(x0.size(), 0);
  return rk4_with_offsets(field, x0.cast<long double>(), none).cast<double>();
}

FlowResult integrate_flow(const MoserField& field, const VectorD& x0) {
  constexpr long double delta = 1e-5L;
  const auto n = x0.size();
  MatrixE offsets(n, 2 * n);
  offsets << delta * MatrixE::Identity(n, n), -delta * MatrixE::Identity(n, n);
  FlowResult out;
  out.steps = step_count(field.problem());
  out.point = rk4_with_offsets(field, x0.cast<long double>(), offsets).cast<double>();
  out.jacobian = ((offsets.leftCols(n) - offsets.rightCols(n)) / (2 * delta)).cast<double>();
  return out;
}

FlowResult integrate_flow(const MoserProblem& p, const VectorD& x0) { return integrate_flow(MoserField(p), x0); }

CertificationReport certify_box(const MoserField& field, int random_points, unsigned seed) {
  const MoserProblem& p = field.problem();
  const int n = p.dim();
  std::vector<VectorD> points;
  if (n > 16) throw PreconditionError("certify_box: dimension too large for vertex sampling");
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    VectorD v(n);
    for (int i = 0; i < n; ++i)
      v(i) = (mask >> i) & 1u ? p.box.upper[static_cast<std::size_t>(i)] : p.box.lower[static_cast<std::size_t>(i)];
    points.push_back(v);
  }
  points.push_back(p.box.center());
  std::mt19937 rng(seed);
  for (int r = 0; r < random_points; ++r) {
    VectorD v(n);
    for (int i = 0; i < n; ++i)
      v(i) = std::uniform_real_distribution<double>(p.box.lower[static_cast<std::size_t>(i)],
                                                    p.box.upper[static_cast<std::size_t>(i)])(rng);
    points.push_back(v);
  }
  const double times[] = {0.0, 0.25, 0.5, 0.75, 1.0};
  CertificationReport rep;
  rep.points = static_cast<int>(points.size());
  rep.times = 5;
  for (const auto& x : points) {
    for (double t : times) {
      if (!is_nondegenerate(field.omega_t(t, x))) rep.nondegenerate = false;
      const Eigen::JacobiSVD<MatrixD> svd(field.system_matrix(t, x));
      const auto& sv = svd.singularValues();
      const double ratio = sv(0) > 0.0 ? sv(sv.size() - 1) / sv(0) : 0.0;
      rep.min_relative_singular_value = std::min(rep.min_relative_singular_value, ratio);
      if (ratio <= ScalarTraits<double>::rank_tolerance) rep.nondegenerate = false;
    }
  }
  return rep;
}

MoserReport verify_normal_form(const MoserProblem& p, unsigned certification_seed) {
  validate(p);
  const MoserField field(p);
  const CompiledPolyForm omega(p.omega), omega_tilde(p.omega_tilde);
  MoserReport rep;
  rep.step = p.step;
  rep.certification = certify_box(field, 100, certification_seed);
  for (const auto& x : p.samples) {
    const FlowResult flow = integrate_flow(field, x);
    rep.steps = flow.steps;
    SampleReport s;
    s.point = x;
    s.image = flow.point;
    s.on_L = x.tail(p.split.fiber_dim).isZero(0.0);
    const AltFormD diff = pullback_linear(flow.jacobian, omega_tilde.eval(flow.point)) - omega.eval(x);
    s.residual = diff.coeffs().size() ? diff.coeffs().cwiseAbs().maxCoeff() : 0.0;
    const Eigen::JacobiSVD<MatrixD> svd(flow.jacobian);
    const auto& sv = svd.singularValues();
    s.jacobian_condition = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : INFINITY;
    if (!std::isfinite(s.residual)) throw FlowError("verify_normal_form: non-finite residual");
    rep.max_residual = std::max(rep.max_residual, s.residual);
    double& side = s.on_L ? rep.max_residual_on_L : rep.max_residual_off_L;
    side = std::max(side, s.residual);
    rep.samples.push_back(std::move(s));
  }
  return rep;
}

std::vector<VectorD> moser_samples(const Box& box, const FiberSplit& split, int on_L, int off_L, unsigned seed,
                                   double interior_fraction) {
  const int n = box.dim();
  if (split.n() != n) throw DimensionMismatch("moser_samples: split does not match box");
  std::mt19937 rng(seed);
  const VectorD c = box.center();
  auto draw = [&](int i) {
    const double half = 0.5 * (box.upper[static_cast<std::size_t>(i)] - box.lower[static_cast<std::size_t>(i)]);
    return c(i) + interior_fraction * std::uniform_real_distribution<double>(-half, half)(rng);
  };
  std::vector<VectorD> out;
  for (int s = 0; s < on_L; ++s) {
    VectorD v = VectorD::Zero(n);
    for (int i = 0; i < split.base_dim; ++i) v(i) = draw(i);
    out.push_back(v);
  }
  for (int s = 0; s < off_L; ++s) {
    VectorD v(n);
    for (int i = 0; i < n; ++i) v(i) = draw(i);
    out.push_back(v);
  }
  return out;
}

MoserProblem demo_problem(double step, unsigned seed) {
  const Tautological taut = tautological_setup(3, 2);
  const int n = taut.split.n();
  const int p12 = taut.split.base_dim;  // first fiber coordinate
  PolyForm beta(n, 2);
  beta.coeff_ref(MultiIndex({0, 1})) = Poly::variable(n, p12).pow(2);
  MoserProblem p;
  p.omega_tilde = taut.omega;
  p.omega = taut.omega + Rational(1, 10) * ext_d(beta);
  p.split = taut.split;
  p.box = Box::symmetric(n, 0.5);
  p.step = step;
  p.samples = moser_samples(p.box, p.split, 20, 30, seed);
  return p;
}

}  // namespace mplectic
