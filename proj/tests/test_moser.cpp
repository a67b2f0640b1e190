#include "instances.hpp"

#include "mplectic/moser.hpp"
#include "mplectic/syntax.hpp"

#include <doctest.h>

#include <cmath>

using namespace mplectic;

namespace {

PolyForm pf(const char* text, int n) { return parse_poly_form(text, n, std::nullopt); }

/// omega_tilde = tautological form on Lambda^2 T^* R^3, omega = omega_tilde + s d(p12^2 dq^12).
MoserProblem perturbed(const Rational& s, double half_width = 0.5) {
  MoserProblem p;
  p.omega_tilde = tautological_setup(3, 2).omega;
  p.omega = p.omega_tilde + s * ext_d(pf("x4^2 dx12", 6));
  p.split = FiberSplit{3, 3};
  p.box = Box::symmetric(6, half_width);
  return p;
}

// Closed-form field of the perturbed problem: only the p12 component moves,
// dp/dt = -(s p^2) / (1 - 2 s (1 - t) p).
long double p12_rate(long double s, long double t, long double p) { return -(s * p * p) / (1 - 2 * s * (1 - t) * p); }

/// Time-one value of p12 by RK4 on the scalar equation with a fine step.
long double p12_oracle(long double s, long double p0) {
  const int steps = 4000;
  const long double h = 1.0L / steps;
  long double p = p0;
  for (int i = 0; i < steps; ++i) {
    const long double t = i * h;
    const long double k1 = p12_rate(s, t, p);
    const long double k2 = p12_rate(s, t + h / 2, p + h / 2 * k1);
    const long double k3 = p12_rate(s, t + h / 2, p + h / 2 * k2);
    const long double k4 = p12_rate(s, t + h, p + h * k3);
    p += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return p;
}

VectorQ random_rational_point(std::mt19937& rng, int n, int den) {
  VectorQ x(n);
  for (int i = 0; i < n; ++i) x(i) = Rational(oracle::uniform(rng, -den / 2, den / 2), den);
  return x;
}

}  // namespace

TEST_CASE("moser_path") {
  const MoserProblem p = perturbed(Rational(1, 10));
  CHECK(moser_path(p, 0) == p.omega);
  CHECK(moser_path(p, 1) == p.omega_tilde);
  CHECK(moser_path(p, Rational(1, 2)) == Rational(1, 2) * (p.omega + p.omega_tilde));
  CHECK_THROWS_AS(moser_path(p, Rational(-1, 100)), PreconditionError);
  CHECK_THROWS_AS(moser_path(p, Rational(101, 100)), PreconditionError);
}

TEST_CASE("moser_mu") {
  const MoserProblem p = perturbed(Rational(1, 10));
  const PolyForm mu = moser_mu(p);
  CHECK(mu == pf("-1/10 x4^2 dx12", 6));
  CHECK(ext_d(mu) == p.omega_tilde - p.omega);
  CHECK(mu.eval_at(VectorQ{{1, -2, 3, 0, 0, 0}}).is_zero());
  for (int i = 3; i < 6; ++i) CHECK(contract_poly(PolyMap::constant(6, unit_vector<Rational>(6, i)), mu).is_zero());

  MoserProblem same = p;
  same.omega = same.omega_tilde;
  CHECK(moser_mu(same).is_zero());
}

TEST_CASE("field at a rational point solves the linear equation exactly") {
  const MoserProblem p = perturbed(Rational(1, 10));
  const MoserField field(p);
  const Rational t(1, 2);
  const VectorQ x = VectorQ::Constant(6, Rational(1, 4));
  const VectorQ X = field(t, x);
  // -(p^2/10) / (1 - (1 - t) p / 5) at p = 1/4, t = 1/2
  CHECK(X == VectorQ{{0, 0, 0, Rational(-1, 156), 0, 0}});
  CHECK((contract(X, moser_path(p, t).eval_at(x)) + field.mu().eval_at(x)).is_zero());

  std::mt19937 rng(301);
  for (int trial = 0; trial < 40; ++trial) {
    const VectorQ y = random_rational_point(rng, 6, 8);
    const Rational s(oracle::uniform(rng, 0, 4), 4);
    const VectorQ Y = field(s, y);
    CHECK((contract(Y, moser_path(p, s).eval_at(y)) + field.mu().eval_at(y)).is_zero());
    CHECK(Y.head(3).isZero());
  }
}

TEST_CASE("field with every fiber direction active solves the linear equation exactly") {
  MoserProblem p;
  p.omega_tilde = tautological_setup(3, 2).omega;
  const PolyForm beta = pf("x4 x5 dx12 + x6^2 dx13 + x1 x4 x6 dx23", 6);
  p.omega = p.omega_tilde + Rational(1, 20) * ext_d(beta);
  p.split = FiberSplit{3, 3};
  p.box = Box::symmetric(6, 0.5);
  REQUIRE_NOTHROW(validate(p));
  const MoserField field(p);
  std::mt19937 rng(303);
  for (int trial = 0; trial < 40; ++trial) {
    const VectorQ y = random_rational_point(rng, 6, 6);
    const Rational s(oracle::uniform(rng, 0, 4), 4);
    const VectorQ Y = field(s, y);
    CHECK((contract(Y, moser_path(p, s).eval_at(y)) + field.mu().eval_at(y)).is_zero());
  }
}

TEST_CASE("field vanishes on L and when mu does") {
  const MoserProblem p = perturbed(Rational(1, 10));
  const MoserField field(p);
  std::mt19937 rng(305);
  for (int trial = 0; trial < 20; ++trial) {
    VectorQ x = random_rational_point(rng, 6, 6);
    x.tail(3).setZero();
    for (const Rational t : {Rational(0), Rational(1, 3), Rational(1)}) CHECK(field(t, x).isZero());
    CHECK(field(0.5, cast_vector<double>(x)).isZero());
  }
  MoserProblem same = p;
  same.omega = same.omega_tilde;
  const MoserField zero(same);
  CHECK(zero(Rational(1, 2), VectorQ(VectorQ::Constant(6, Rational(1, 3)))).isZero());
}

TEST_CASE("system matrix on L is the chi matrix") {
  std::mt19937 rng(307);
  for (const Rational s : {Rational(1, 10), Rational(-1, 3)}) {
    const MoserProblem p = perturbed(s);
    const MoserField field(p);
    for (int trial = 0; trial < 10; ++trial) {
      VectorQ x = random_rational_point(rng, 6, 6);
      x.tail(3).setZero();
      const auto check = verify_standard(p.omega.eval_at(x), fiber_summand<Rational>(3, 2));
      REQUIRE(std::holds_alternative<StandardStructure<Rational>>(check));
      const MatrixQ chi = std::get<StandardStructure<Rational>>(check).chi_matrix;
      for (const Rational t : {Rational(0), Rational(1, 2), Rational(1)}) CHECK(field.system_matrix(t, x) == chi);
    }
  }
}

TEST_CASE("flow fixes L and is the identity for mu = 0") {
  const MoserProblem p = perturbed(Rational(1, 10));
  const MoserField field(p);
  std::mt19937 rng(309);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int trial = 0; trial < 5; ++trial) {
    VectorD x(6);
    for (int i = 0; i < 6; ++i) x(i) = i < 3 ? u(rng) : 0.0;
    const FlowResult r = integrate_flow(field, x);
    CHECK((r.point - x).cwiseAbs().maxCoeff() <= 1e-9);
    // the flow moves nearby fiber points, so only the base block of the Jacobian is pinned
    CHECK((r.jacobian.topRows(3) - MatrixD::Identity(6, 6).topRows(3)).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK(r.steps == 100);
  }
  MoserProblem same = p;
  same.omega = same.omega_tilde;
  const MoserField zero(same);
  VectorD y(6);
  y << 0.1, -0.2, 0.3, 0.4, -0.1, 0.2;
  const FlowResult r = integrate_flow(zero, y);
  CHECK((r.point - y).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((r.jacobian - MatrixD::Identity(6, 6)).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("flow agrees with the scalar closed-form equation") {
  const MoserProblem p = perturbed(Rational(1, 10));
  const MoserField field(p);
  for (const double p0 : {0.45, 0.2, -0.1, -0.4}) {
    VectorD x(6);
    x << 0.3, -0.1, 0.2, p0, 0.25, -0.35;
    const FlowResult r = integrate_flow(field, x);
    VectorD expected = x;
    expected(3) = static_cast<double>(p12_oracle(0.1L, p0));
    CHECK((r.point - expected).cwiseAbs().maxCoeff() <= 1e-10);
    // d phi(p) / d p0 by differencing the oracle
    const double h = 1e-4;
    const double slope = static_cast<double>((p12_oracle(0.1L, p0 + h) - p12_oracle(0.1L, p0 - h)) / (2 * h));
    CHECK(r.jacobian(3, 3) == doctest::Approx(slope).epsilon(1e-6));
    CHECK(std::abs(r.jacobian(3, 0)) <= 1e-9);
  }
}

TEST_CASE("flow errors") {
  // a large perturbation makes the fiber system singular at p12 = 1 / (2 s (1 - t))
  const MoserProblem p = perturbed(Rational(5), 0.5);
  const MoserField field(p);
  VectorD x = VectorD::Zero(6);
  x(3) = 0.3;
  CHECK_THROWS_AS(integrate_flow(field, x), FlowError);
  // starting outside the box
  const MoserProblem q = perturbed(Rational(1, 10), 0.5);
  const MoserField fq(q);
  VectorD y = VectorD::Zero(6);
  y(0) = 0.7;
  CHECK_THROWS_AS(integrate_flow(fq, y), FlowError);
}

TEST_CASE("normal form verification") {
  MoserProblem same = perturbed(Rational(1, 10));
  same.omega = same.omega_tilde;
  same.samples = moser_samples(same.box, same.split, 3, 5, 7);
  const MoserReport r = verify_normal_form(same);
  CHECK(r.max_residual <= 1e-12);
  CHECK(r.samples.size() == 8);

  const MoserProblem demo = demo_problem();
  REQUIRE_NOTHROW(validate(demo));
  const MoserReport d = verify_normal_form(demo);
  CHECK(d.max_residual <= 1e-5);
  CHECK(d.max_residual_on_L <= 1e-9);
  CHECK(d.certification.nondegenerate);
  CHECK(d.steps == 100);
  for (const auto& s : d.samples) {
    CHECK(std::isfinite(s.residual));
    CHECK(demo.box.contains(s.image));
  }
}

TEST_CASE("samples and boxes") {
  const Box b = Box::symmetric(4, 0.5);
  CHECK(b.center() == VectorD::Zero(4));
  CHECK(b.contains(VectorD::Constant(4, 0.5)));
  CHECK_FALSE(b.contains(VectorD::Constant(4, 0.51)));
  CHECK(b.contains(VectorD::Constant(4, 0.51), 0.02));
  CHECK_THROWS_AS(Box::symmetric(4, 0.0), PreconditionError);
  const auto samples = moser_samples(b, FiberSplit{2, 2}, 4, 6, 11);
  REQUIRE(samples.size() == 10);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    CHECK(b.contains(samples[i], 0.0));
    CHECK(samples[i].cwiseAbs().maxCoeff() <= 0.45);
    if (i < 4) CHECK(samples[i].tail(2).isZero());
  }
  CHECK(moser_samples(b, FiberSplit{2, 2}, 4, 6, 11) == samples);
}

TEST_CASE("problem validation") {
  const MoserProblem good = perturbed(Rational(1, 10));
  CHECK_NOTHROW(validate(good));

  MoserProblem not_closed = good;
  not_closed.omega = not_closed.omega + pf("x5 dx123", 6);
  CHECK_THROWS_AS(validate(not_closed), PreconditionError);

  MoserProblem differs = good;
  differs.omega = differs.omega + pf("dx123", 6);
  CHECK_THROWS_AS(validate(differs), PreconditionError);

  MoserProblem fiber_pair = good;
  fiber_pair.omega = fiber_pair.omega + ext_d(pf("x1 x4 dx56", 6));
  CHECK_THROWS_AS(validate(fiber_pair), PreconditionError);

  MoserProblem bad_split = good;
  bad_split.split = FiberSplit{4, 2};
  CHECK_THROWS_AS(validate(bad_split), PreconditionError);

  MoserProblem bad_step = good;
  bad_step.step = 0.0;
  CHECK_THROWS_AS(validate(bad_step), PreconditionError);

  MoserProblem bad_box = good;
  bad_box.box = Box::symmetric(5, 0.5);
  CHECK_THROWS_AS(validate(bad_box), DimensionMismatch);

  MoserProblem symplectic;
  symplectic.omega = pf("dx12", 2);
  symplectic.omega_tilde = pf("dx12", 2);
  symplectic.split = FiberSplit{1, 1};
  symplectic.box = Box::symmetric(2, 0.5);
  CHECK_THROWS_AS(validate(symplectic), PreconditionError);
}
