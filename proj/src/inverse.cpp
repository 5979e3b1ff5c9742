#include "podinv/inverse.hpp"

#include <chrono>
#include <cmath>

namespace podinv {

StopRule parse_stop_rule(const std::string& name) {
  if (name == "objective") return StopRule::objective_below_tol;
  if (name == "relative-update") return StopRule::relative_update_below_tol;
  if (name == "gradient-norm") return StopRule::gradient_norm_below_tol;
  detail::fail(errc::parse_error, "unknown stop rule '" + name +
                                      "' (expected objective | relative-update | gradient-norm)");
}

const char* to_string(StopRule rule) {
  switch (rule) {
    case StopRule::objective_below_tol: return "objective";
    case StopRule::relative_update_below_tol: return "relative-update";
    case StopRule::gradient_norm_below_tol: return "gradient-norm";
  }
  return "unknown";
}

FemEngine::FemEngine(const FemOperators& ops, const TimeGrid& grid, const SensorSet& sensors,
                     const Field& g)
    : ops_(&ops), solver_(ops, grid) {
  const SparseMatrix eval = point_eval_matrix(*ops.mesh, sensors.points);
  // boundary coefficients vanish, so only the free columns matter
  std::vector<Eigen::Triplet<double>> trips;
  for (int k = 0; k < eval.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(eval, k); it; ++it) {
      const int free_col = ops.node_to_free[it.col()];
      if (free_col >= 0) trips.emplace_back(static_cast<int>(it.row()), free_col, it.value());
    }
  }
  eval_free_.resize(sensors.count(), ops.free_count());
  eval_free_.setFromTriplets(trips.begin(), trips.end());

  if (g.coeffs.isZero(0.0)) {
    offset_ = Vector::Zero(sensors.count());
  } else {
    offset_ = eval_free_ * solver_.propagate_initial(restrict_to_free(ops, g.coeffs));
  }
}

Vector FemEngine::forward(const Vector& f_coeffs) const {
  const Vector load = restrict_to_free(*ops_, ops_->mass * f_coeffs);
  return eval_free_ * solver_.propagate_load(load);
}

Vector FemEngine::adjoint(const Vector& residual) const {
  const Vector back = solver_.propagate_load(eval_free_.transpose() * residual);
  return extend_from_free(*ops_, back) / static_cast<double>(sensor_count());
}

PodEngine::PodEngine(const ReducedOperators& red, const FemOperators& ops, const TimeGrid& grid,
                     const SensorSet& sensors, const Field& g)
    : mesh_(red.mesh), mass_(ops.mass), lift_(red.lift), mass_lift_(red.mass_lift) {
  require(ops.mesh.get() == red.mesh.get(), errc::incompatible_operands,
          "reduced operators and FEM operators live on different meshes");
  const int rank = red.rank();
  const Matrix system = Matrix::Identity(rank, rank) + grid.dt * red.stiffness_r;
  const Eigen::LLT<Matrix> solver(system);
  require(solver.info() == Eigen::Success, errc::solver_failure, "reduced system not SPD");

  const Matrix sensor_modes = red.sensor_modes.size() > 0
                                  ? red.sensor_modes
                                  : Matrix(point_eval_matrix(*red.mesh, sensors.points) * red.lift);

  // G_r = Δt Σ_{j=1..m} D^{-j}; c_m = G_r ΦᵀMf for zero initial data
  Matrix power = Matrix::Identity(rank, rank);
  Matrix accumulated = Matrix::Zero(rank, rank);
  for (int j = 0; j < grid.steps; ++j) {
    power = solver.solve(power);
    accumulated += power;
  }
  const Matrix integrated = grid.dt * accumulated;
  response_ = sensor_modes * integrated;

  if (g.coeffs.isZero(0.0)) {
    offset_ = Vector::Zero(sensors.count());
  } else {
    const Vector c0 = mass_lift_.transpose() * g.coeffs;
    offset_ = sensor_modes * (power * c0);  // power = D^{-m} after the loop
  }
}

Vector PodEngine::forward(const Vector& f_coeffs) const {
  return response_ * (mass_lift_.transpose() * f_coeffs);
}

Vector PodEngine::adjoint(const Vector& residual) const {
  return lift_ * (response_.transpose() * residual) / static_cast<double>(sensor_count());
}

namespace {

Vector residual_at(const ForwardEngine& engine, const Vector& f, const Observation& obs) {
  require(obs.values.size() == engine.sensor_count(), errc::incompatible_operands,
          "observation length does not match the engine's sensor count");
  return engine.forward(f) + engine.offset() - obs.values;
}

}  // namespace

double objective_value(const ForwardEngine& engine, const Field& f, const Observation& obs,
                       double lambda) {
  require(f.mesh.get() == engine.mesh().get(), errc::incompatible_operands,
          "iterate does not live on the engine's mesh");
  const Vector r = residual_at(engine, f.coeffs, obs);
  const double misfit = r.squaredNorm() / static_cast<double>(r.size());
  return misfit + lambda * engine.l2_inner(f.coeffs, f.coeffs);
}

Field objective_gradient(const ForwardEngine& engine, const Field& f, const Observation& obs,
                         double lambda) {
  require(f.mesh.get() == engine.mesh().get(), errc::incompatible_operands,
          "iterate does not live on the engine's mesh");
  const Vector r = residual_at(engine, f.coeffs, obs);
  Vector grad = engine.adjoint(r);
  if (lambda != 0.0) grad += lambda * f.coeffs;
  return Field(engine.mesh(), std::move(grad));
}

double estimate_step_bound(const ForwardEngine& engine, double lambda, int iterations,
                           std::uint64_t seed) {
  NormalSampler sampler(seed);
  Vector v(engine.mesh()->node_count());
  for (int i = 0; i < v.size(); ++i) v[i] = sampler.next();
  double norm = engine.l2_norm(v);
  require(norm > 0.0, errc::numeric_failure, "degenerate power-iteration start");
  v /= norm;

  double rayleigh = lambda;
  for (int it = 0; it < iterations; ++it) {
    Vector w = engine.adjoint(engine.forward(v));
    if (lambda != 0.0) w += lambda * v;
    rayleigh = engine.l2_inner(v, w);
    const double w_norm = engine.l2_norm(w);
    if (w_norm <= 0.0) break;  // S*S+λI annihilated v: L is ~0
    v = w / w_norm;
  }
  return std::max(rayleigh, 1e-300);
}

InverseResult gradient_descent(const ForwardEngine& engine, const Observation& obs,
                               const ObjectiveConfig& config, const Field& f0) {
  config.validate();
  require(f0.mesh.get() == engine.mesh().get(), errc::incompatible_operands,
          "initial guess does not live on the engine's mesh");
  const auto t_start = std::chrono::steady_clock::now();

  const double alpha =
      config.alpha > 0.0 ? config.alpha : 0.9 / estimate_step_bound(engine, config.lambda);

  InverseResult result;
  result.lambda_used = config.lambda;
  result.alpha_used = alpha;

  Field f = f0;
  double j_value = objective_value(engine, f, obs, config.lambda);
  result.objective_history.push_back(j_value);
  Field best = f;
  double best_value = j_value;
  int increases = 0;

  for (int k = 0; k < config.max_iter; ++k) {
    if (config.stop_rule == StopRule::objective_below_tol && j_value <= config.tol) break;

    const Field grad = objective_gradient(engine, f, obs, config.lambda);
    const double grad_norm = engine.l2_norm(grad.coeffs);
    if (config.stop_rule == StopRule::gradient_norm_below_tol && grad_norm < config.tol) break;

    Field next(engine.mesh(), f.coeffs - alpha * grad.coeffs);
    const double next_value = objective_value(engine, next, obs, config.lambda);
    result.objective_history.push_back(next_value);
    ++result.iterations;

    if (next_value > j_value) {
      if (++increases >= 5)
        detail::fail(errc::step_size_too_large,
                     "objective increased 5 consecutive steps; lower alpha (or keep alpha <= 0 "
                     "for the automatic 0.9/L choice)");
    } else {
      increases = 0;
    }

    const double update_norm = alpha * grad_norm;  // ‖f_{k+1} − f_k‖
    const double next_norm = engine.l2_norm(next.coeffs);
    f = std::move(next);
    j_value = next_value;
    if (j_value < best_value) {
      best_value = j_value;
      best = f;
    }

    if (config.stop_rule == StopRule::relative_update_below_tol &&
        update_norm < config.tol * std::max(next_norm, 1e-300))
      break;
  }

  result.f_hat = std::move(best);
  result.solve_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return result;
}

Field solve_normal_equations(const PodEngine& engine, const Observation& obs, double lambda) {
  require(lambda >= 0.0, errc::invalid_argument, "lambda must be nonnegative");
  require(obs.values.size() == engine.sensor_count(), errc::incompatible_operands,
          "observation length does not match the engine's sensor count");
  const Matrix& response = engine.sensor_response();
  const double n = static_cast<double>(engine.sensor_count());
  const int rank = engine.rank();
  const Matrix normal = response.transpose() * response / n + lambda * Matrix::Identity(rank, rank);
  const Vector rhs = response.transpose() * (obs.values - engine.offset()) / n;
  const Vector coeffs = normal.ldlt().solve(rhs);
  return Field(engine.mesh(), engine.lift() * coeffs);
}

LambdaIteration lambda_fixed_point(const ForwardEngine& engine, const Observation& obs, int dim,
                                   const ObjectiveConfig& inner_config, int max_outer) {
  require(dim >= 1 && dim <= 3, errc::invalid_argument, "spatial dimension must be 1, 2 or 3");
  require(max_outer >= 1, errc::invalid_argument, "need at least one outer iteration");
  const double n = static_cast<double>(obs.values.size());
  const double exponent = 1.0 / (0.5 + dim / 8.0);

  LambdaIteration out;
  double lambda = std::pow(n, -4.0 / (dim + 4.0));
  out.lambda_history.push_back(lambda);

  Field f = zero_field(engine.mesh());
  double prev_norm = -1.0;
  for (int outer = 0; outer < max_outer; ++outer) {
    ObjectiveConfig cfg = inner_config;
    cfg.lambda = lambda;
    out.result = gradient_descent(engine, obs, cfg, f);
    f = out.result.f_hat;

    const double f_norm = engine.l2_norm(f.coeffs);
    require(f_norm > 1e-14, errc::degenerate_iterate,
            "iterate collapsed to zero; cannot form the lambda update");
    const double residual = empirical_norm(engine.forward(f.coeffs) + engine.offset() - obs.values);
    lambda = std::pow(residual / (std::sqrt(n) * f_norm), exponent);

    out.lambda_history.push_back(lambda);
    out.f_norm_history.push_back(f_norm);
    out.residual_history.push_back(residual);

    if (prev_norm > 0.0 && std::abs(f_norm - prev_norm) < 0.01 * prev_norm) {
      out.converged = true;
      break;
    }
    prev_norm = f_norm;
  }
  return out;
}

}  // namespace podinv
