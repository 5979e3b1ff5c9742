#pragma once

#include <memory>

#include "podinv/pod.hpp"

namespace podinv {

enum class StopRule {
  objective_below_tol,
  relative_update_below_tol,
  gradient_norm_below_tol,
};

StopRule parse_stop_rule(const std::string& name);
const char* to_string(StopRule rule);

struct ObjectiveConfig {
  double lambda = 1e-6;
  double alpha = 0.0;  // <= 0 selects 0.9/L with L from power iteration
  double tol = 1e-5;
  int max_iter = 10000;
  StopRule stop_rule = StopRule::relative_update_below_tol;

  void validate() const {
    require(lambda >= 0.0, errc::invalid_argument, "lambda must be nonnegative");
    require(tol > 0.0, errc::invalid_argument, "tolerance must be positive");
    require(max_iter >= 1, errc::invalid_argument, "max_iter must be at least 1");
  }
};

/// Discrete forward map S_dis at the sensors, linear in f; the initial
/// condition enters as the fixed affine offset. adjoint() returns the
/// L²-Riesz representative r with (r, v)_{L²} = (residual, S_dis v)_n ∀v.
class ForwardEngine {
 public:
  virtual ~ForwardEngine() = default;

  virtual Vector forward(const Vector& f_coeffs) const = 0;
  virtual Vector adjoint(const Vector& residual) const = 0;
  virtual const Vector& offset() const = 0;
  virtual const MeshPtr& mesh() const = 0;
  virtual const SparseMatrix& mass() const = 0;
  virtual int sensor_count() const = 0;
  virtual const char* name() const = 0;

  double l2_inner(const Vector& u, const Vector& v) const { return u.dot(mass() * v); }
  double l2_norm(const Vector& u) const { return std::sqrt(std::max(0.0, l2_inner(u, u))); }
};

/// Full-order engine: load projection → backward-Euler propagation → sensor
/// evaluation, with the transposed chain as the adjoint.
class FemEngine : public ForwardEngine {
 public:
  FemEngine(const FemOperators& ops, const TimeGrid& grid, const SensorSet& sensors, const Field& g);

  Vector forward(const Vector& f_coeffs) const override;
  Vector adjoint(const Vector& residual) const override;
  const Vector& offset() const override { return offset_; }
  const MeshPtr& mesh() const override { return ops_->mesh; }
  const SparseMatrix& mass() const override { return ops_->mass; }
  int sensor_count() const override { return static_cast<int>(eval_free_.rows()); }
  const char* name() const override { return "fem"; }

 private:
  const FemOperators* ops_;
  FullSolver solver_;
  SparseMatrix eval_free_;  // sensor evaluation on the free dofs
  Vector offset_;
};

/// Reduced engine: S_pod f = H Wᵀ f with W = MΦ and H the sensor responses
/// of the time-integrated reduced propagator; both matrices are precomputed
/// so one application costs two small dense matvecs.
class PodEngine : public ForwardEngine {
 public:
  PodEngine(const ReducedOperators& red, const FemOperators& ops, const TimeGrid& grid,
            const SensorSet& sensors, const Field& g);

  Vector forward(const Vector& f_coeffs) const override;
  Vector adjoint(const Vector& residual) const override;
  const Vector& offset() const override { return offset_; }
  const MeshPtr& mesh() const override { return mesh_; }
  const SparseMatrix& mass() const override { return mass_; }
  int sensor_count() const override { return static_cast<int>(response_.rows()); }
  const char* name() const override { return "pod"; }

  int rank() const { return static_cast<int>(lift_.cols()); }
  const Matrix& sensor_response() const { return response_; }
  const Matrix& lift() const { return lift_; }
  const Matrix& mass_lift() const { return mass_lift_; }

 private:
  MeshPtr mesh_;
  SparseMatrix mass_;
  Matrix lift_;       // Φ
  Matrix mass_lift_;  // W = MΦ
  Matrix response_;   // H = sensor_modes · G_r
  Vector offset_;
};

double objective_value(const ForwardEngine& engine, const Field& f, const Observation& obs,
                       double lambda);

/// Paper-convention gradient S*(Sf−m) + λf (the factor 2 of the square is
/// absorbed into the step size).
Field objective_gradient(const ForwardEngine& engine, const Field& f, const Observation& obs,
                         double lambda);

/// Largest eigenvalue of f ↦ S*Sf + λf in the L² geometry, by power
/// iteration; 1/L bounds the monotone-descent step size.
double estimate_step_bound(const ForwardEngine& engine, double lambda, int iterations = 30,
                           std::uint64_t seed = 0x9e3779b97f4a7c15ULL);

struct InverseResult {
  Field f_hat;
  std::vector<double> objective_history;  // J at every iterate, f0 first
  int iterations = 0;
  double lambda_used = 0.0;
  double alpha_used = 0.0;
  double solve_seconds = 0.0;
};

InverseResult gradient_descent(const ForwardEngine& engine, const Observation& obs,
                               const ObjectiveConfig& config, const Field& f0);

/// Exact minimizer of the reduced-engine functional via the N_pod×N_pod
/// normal equations; for λ>0 the global minimizer over L² lies in span(Φ).
Field solve_normal_equations(const PodEngine& engine, const Observation& obs, double lambda);

struct LambdaIteration {
  std::vector<double> lambda_history;  // λ_0, λ_1, ...
  std::vector<double> f_norm_history;
  std::vector<double> residual_history;
  InverseResult result;
  bool converged = false;
};

/// Fixed-point iteration λ^{1/2+d/8} = n^{-1/2}‖Sf_j − m‖_n / ‖f_j‖_{L²}
/// from λ_0 = n^{-4/(d+4)}; stops when ‖f_j‖ changes by under 1% or after
/// max_outer rounds. Inner solves warm-start from the previous iterate.
LambdaIteration lambda_fixed_point(const ForwardEngine& engine, const Observation& obs, int dim,
                                   const ObjectiveConfig& inner_config, int max_outer = 20);

}  // namespace podinv
