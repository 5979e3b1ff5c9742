#include "podinv/forward.hpp"

namespace podinv {

FullSolver::FullSolver(const FemOperators& ops, const TimeGrid& grid) : ops_(&ops), grid_(grid) {
  SparseMatrix system = ops.mass_ff + grid.dt * ops.stiffness_ff;
  system_.compute(system);
  require(system_.info() == Eigen::Success, errc::solver_failure,
          "factorization of (M + dt*A) failed");
}

Vector FullSolver::step_chain(Vector u_free, const Vector* load_free) const {
  for (int k = 0; k < grid_.steps; ++k) {
    Vector rhs = ops_->mass_ff * u_free;
    if (load_free) rhs += grid_.dt * (*load_free);
    u_free = system_.solve(rhs);
  }
  return u_free;
}

Trajectory FullSolver::solve(const Field& f, const Field& g) const {
  require(f.mesh.get() == ops_->mesh.get() && g.mesh.get() == ops_->mesh.get(),
          errc::incompatible_operands, "source/initial fields do not match the operators' mesh");
  for (int i = 0; i < ops_->mesh->node_count(); ++i) {
    if (ops_->mesh->boundary_mask[i])
      require(std::abs(g.coeffs[i]) <= 1e-12, errc::invalid_argument,
              "initial field must satisfy the homogeneous Dirichlet condition");
  }

  const Vector load = restrict_to_free(*ops_, ops_->mass * f.coeffs);
  Trajectory traj;
  traj.mesh = ops_->mesh;
  traj.grid = grid_;
  traj.states.reserve(grid_.steps + 1);
  traj.states.push_back(g.coeffs);

  Vector u = restrict_to_free(*ops_, g.coeffs);
  for (int k = 1; k <= grid_.steps; ++k) {
    u = system_.solve(ops_->mass_ff * u + grid_.dt * load);
    traj.states.push_back(extend_from_free(*ops_, u));
  }
  return traj;
}

Field FullSolver::final_state(const Field& f, const Field& g) const {
  const Vector load = restrict_to_free(*ops_, ops_->mass * f.coeffs);
  Vector u = restrict_to_free(*ops_, g.coeffs);
  Vector rhs_part = grid_.dt * load;
  for (int k = 0; k < grid_.steps; ++k) u = system_.solve(ops_->mass_ff * u + rhs_part);
  return Field(ops_->mesh, extend_from_free(*ops_, u));
}

Vector FullSolver::propagate_load(const Vector& load_free) const {
  Vector q = system_.solve(load_free);
  Vector acc = q;
  for (int j = 1; j < grid_.steps; ++j) {
    q = system_.solve(ops_->mass_ff * q);
    acc += q;
  }
  return grid_.dt * acc;
}

Vector FullSolver::propagate_initial(const Vector& g_free) const {
  Vector u = g_free;
  for (int k = 0; k < grid_.steps; ++k) u = system_.solve(ops_->mass_ff * u);
  return u;
}

Trajectory solve_full(const FemOperators& ops, const Field& f, const Field& g, const TimeGrid& grid) {
  return FullSolver(ops, grid).solve(f, g);
}

Vector forward_map_full(const FemOperators& ops, const Field& f, const Field& g,
                        const TimeGrid& grid, const SensorSet& sensors) {
  const Trajectory traj = solve_full(ops, f, g, grid);
  return evaluate_at_points(traj.state_field(grid.steps), sensors.points);
}

}  // namespace podinv
