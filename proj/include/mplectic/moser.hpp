#pragma once

// Moser path method near the zero section L = {fiber = 0}: omega_t interpolates
// omega -> omega_tilde, X_t solves iota_{X_t} omega_t + mu = 0 inside the
// fiber summand, and the time-one flow phi satisfies phi^* omega_tilde = omega.

#include "mplectic/polyforms.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace mplectic {

class FlowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Axis-aligned coordinate box.
struct Box {
  std::vector<double> lower;
  std::vector<double> upper;

  static Box symmetric(int n, double half_width);
  int dim() const { return static_cast<int>(lower.size()); }
  bool contains(const VectorD& x, double slack = 0.0) const;
  VectorD center() const;
};

struct MoserProblem {
  PolyForm omega;
  PolyForm omega_tilde;
  FiberSplit split;
  Box box;
  double step = 1e-2;
  std::vector<VectorD> samples;

  int dim() const { return omega.dim(); }
  int k() const { return omega.degree() - 1; }
};

/// Checks closedness, agreement of omega and omega_tilde along L, fiber-pair
/// vanishing of the difference, the fiber dimension C(base, k) and that the
/// fiber summand is standard for omega on L at the box center. Throws
/// PreconditionError with the first failure.
void validate(const MoserProblem& p);

/// omega_t = omega + t (omega_tilde - omega), 0 <= t <= 1.
PolyForm moser_path(const MoserProblem& p, const Rational& t);

/// Primitive of omega_tilde - omega from the fiber homotopy operator:
/// d mu = omega_tilde - omega, mu|_L = 0 and iota_v mu = 0 for fiber v.
PolyForm moser_mu(const MoserProblem& p);

/// Caches omega, omega' and mu (exact and compiled to double) for repeated
/// field evaluations.
class MoserField {
 public:
  explicit MoserField(const MoserProblem& p);

  const MoserProblem& problem() const { return *problem_; }
  const PolyForm& mu() const { return mu_; }

  /// d x d matrix of u -> iota_u omega_t(x) on fiber vectors, evaluated on the
  /// lexicographic k-tuples of base directions.
  template <class T>
  Matrix<T> system_matrix(const T& t, const Vector<T>& x) const;

  /// The fiber vector X with iota_X omega_t(x) + mu(x) = 0. Throws FlowError
  /// when the system is singular.
  template <class T>
  Vector<T> operator()(const T& t, const Vector<T>& x) const;

  AltFormD omega_t(double t, const VectorD& x) const;
  AltFormD mu_at(const VectorD& x) const { return mu_d_.eval(x); }

 private:
  template <class T>
  AltForm<T> omega_t_generic(const T& t, const Vector<T>& x) const;

  const MoserProblem* problem_;
  PolyForm omega_prime_;
  PolyForm mu_;
  CompiledPolyForm omega_d_;
  CompiledPolyForm omega_prime_d_;
  CompiledPolyForm mu_d_;
  std::vector<Eigen::Index> base_rows_;  // rows of the sharp matrix for base k-tuples
};

template <class T>
Vector<T> moser_field(const MoserProblem& p, const T& t, const Vector<T>& x) {
  return MoserField(p)(t, x);
}

struct FlowResult {
  VectorD point;
  MatrixD jacobian;
  int steps = 0;
};

/// Classical RK4 over t in [0, 1] with fixed step, Jacobian by central
/// differences (perturbation 1e-5 per coordinate). Trajectories are integrated
/// in extended precision, the perturbed ones as offsets from the base
/// trajectory. Throws FlowError when a stage point leaves the box.
FlowResult integrate_flow(const MoserField& field, const VectorD& x0);
FlowResult integrate_flow(const MoserProblem& p, const VectorD& x0);

/// Time-one flow map only.
VectorD flow_map(const MoserField& field, const VectorD& x0);

struct SampleReport {
  VectorD point;
  VectorD image;
  bool on_L = false;
  double residual = 0.0;
  double jacobian_condition = 0.0;
};

struct CertificationReport {
  int points = 0;
  int times = 0;
  bool nondegenerate = true;
  double min_relative_singular_value = 1.0;  // of the fiber system, over all checks
};

struct MoserReport {
  std::vector<SampleReport> samples;
  int steps = 0;
  double step = 0.0;
  double max_residual = 0.0;
  double max_residual_on_L = 0.0;
  double max_residual_off_L = 0.0;
  CertificationReport certification;
};

/// Samples vertices, center and `random_points` random points of the box at
/// t in {0, 1/4, 1/2, 3/4, 1}; checks omega_t and the fiber system are nondegenerate.
CertificationReport certify_box(const MoserField& field, int random_points = 100, unsigned seed = 1);

/// Residual max |phi^* omega_tilde - omega| over basis (k+1)-tuples at every sample.
MoserReport verify_normal_form(const MoserProblem& p, unsigned certification_seed = 1);

/// `on_L` points on the zero section and `off_L` points in the box scaled by
/// `interior_fraction` about its center.
std::vector<VectorD> moser_samples(const Box& box, const FiberSplit& split, int on_L, int off_L, unsigned seed,
                                   double interior_fraction = 0.9);

/// omega_tilde = tautological form of Lambda^2 T^* R^3, omega = omega_tilde + (1/10) d(p_12^2 dq^{12}),
/// box [-1/2, 1/2]^6, 20 samples on L and 30 off L.
MoserProblem demo_problem(double step = 1e-2, unsigned seed = 2024);

}  // namespace mplectic
