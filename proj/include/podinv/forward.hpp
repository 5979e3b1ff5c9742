#pragma once

#include <Eigen/SparseCholesky>

#include "podinv/fem.hpp"
#include "podinv/sensors.hpp"

namespace podinv {

struct TimeGrid {
  double T = 1.0;
  double dt = 0.0;
  int steps = 0;  // m

  static TimeGrid from_steps(double T, int m) {
    require(m >= 1 && T > 0.0, errc::invalid_argument, "time grid needs T > 0 and m >= 1");
    return TimeGrid{T, T / m, m};
  }
  static TimeGrid from_dt(double T, double dt) {
    require(T > 0.0 && dt > 0.0, errc::invalid_argument, "time grid needs T, dt > 0");
    const int m = static_cast<int>(std::lround(T / dt));
    require(m >= 1 && std::abs(m * dt - T) <= 1e-12 * std::max(1.0, T), errc::invalid_argument,
            "dt must divide T");
    return TimeGrid{T, dt, m};
  }
};

struct Trajectory {
  MeshPtr mesh;
  TimeGrid grid;
  std::vector<Vector> states;  // m+1 full nodal vectors, zero on the boundary

  Field state_field(int k) const { return Field(mesh, states.at(k)); }
};

/// Backward-Euler integrator for u_t + 𝓛u = f, u|∂Ω = 0, u(0) = g. The SPD
/// factorization of (M + Δt A) on the free dofs is computed once and reused
/// across steps and across sources; a const solver is safe to share between
/// threads running independent solves.
class FullSolver {
 public:
  FullSolver(const FemOperators& ops, const TimeGrid& grid);

  Trajectory solve(const Field& f, const Field& g) const;
  Field final_state(const Field& f, const Field& g) const;

  /// Final free-dof state for zero initial data: u_m = G·load with
  /// G = Δt Σ_{j=0}^{m-1} (B⁻¹M)ʲ B⁻¹ (symmetric); `load` = (Mf)|free.
  Vector propagate_load(const Vector& load_free) const;
  /// Free-dof state after m homogeneous steps from initial free-dof data.
  Vector propagate_initial(const Vector& g_free) const;

  const FemOperators& ops() const { return *ops_; }
  const TimeGrid& grid() const { return grid_; }

 private:
  Vector step_chain(Vector u_free, const Vector* load_free) const;

  const FemOperators* ops_;
  TimeGrid grid_;
  Eigen::SimplicialLDLT<SparseMatrix> system_;  // M_ff + dt*A_ff
};

Trajectory solve_full(const FemOperators& ops, const Field& f, const Field& g, const TimeGrid& grid);

/// S_h f composed with point evaluation: u_h(·,T) at the sensor locations.
Vector forward_map_full(const FemOperators& ops, const Field& f, const Field& g,
                        const TimeGrid& grid, const SensorSet& sensors);

}  // namespace podinv
