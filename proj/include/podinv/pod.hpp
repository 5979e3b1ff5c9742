#pragma once

#include <string>
#include <utility>

#include "podinv/forward.hpp"

namespace podinv {

/// Snapshot matrix (one column per snapshot) plus the mass matrix defining
/// the inner product the correlation analysis runs in.
struct SnapshotSet {
  MeshPtr mesh;
  SparseMatrix mass;
  Matrix snapshots;  // node_count × N_S
  int source_count = 0;
  int per_source = 0;
  bool includes_differences = false;

  int count() const { return static_cast<int>(snapshots.cols()); }
};

/// Concatenate solution states (and optionally the scaled difference
/// quotients ∂̄u(t_k) = (u(t_k)-u(t_{k-1}))/Δt) of every trajectory. With
/// differences each source contributes 2m+1 snapshots (u at t_0..t_m plus m
/// quotients); without, m snapshots (u at t_1..t_m).
SnapshotSet build_snapshot_set(const std::vector<Trajectory>& trajectories, bool include_differences,
                               const FemOperators& ops);

/// Wrap an explicit snapshot matrix (columns are nodal vectors).
SnapshotSet make_snapshot_set(const MeshPtr& mesh, Matrix snapshots, const FemOperators& ops);

struct EigenPairs {
  Vector eigenvalues;   // non-increasing, clamped at 0
  Matrix eigenvectors;  // Euclidean-orthonormal columns, matching order
};

/// Symmetric eigendecomposition of K_ij = (1/N_S)(y_i, y_j)_{L²}.
EigenPairs correlation_eig(const SnapshotSet& snapshots);

/// Minimal N_pod with tail-energy ratio below epsilon.
int select_rank(const Vector& eigenvalues, double epsilon);

struct PodBasis {
  MeshPtr mesh;
  Matrix modes;        // node_count × N_pod, M-orthonormal columns
  Vector eigenvalues;  // full correlation spectrum
  int rank = 0;
  double rho = 0.0;     // tail ratio at `rank`
  double epsilon = 0.0; // requested threshold (0 when rank was forced)
};

/// φ_k = Y v_k / √(N_S μ_k), sign-fixed so the largest-magnitude coefficient
/// of each mode is positive.
PodBasis build_basis(const SnapshotSet& snapshots, const EigenPairs& pairs, int n_pod,
                     double epsilon = 0.0);

/// Snapshot collection → correlation → rank selection → basis.
PodBasis build_pod_basis(const SnapshotSet& snapshots, double epsilon);

/// Fraction of snapshot energy lost by projecting onto the basis; equals the
/// tail-eigenvalue ratio (the module's master identity).
double projection_error_ratio(const SnapshotSet& snapshots, const PodBasis& basis);

struct ReducedOperators {
  MeshPtr mesh;
  Matrix stiffness_r;   // ΦᵀAΦ
  Matrix lift;          // Φ
  Matrix mass_lift;     // MΦ
  Matrix sensor_modes;  // sensor_count × N_pod (empty when built without sensors)

  int rank() const { return static_cast<int>(stiffness_r.rows()); }
};

ReducedOperators reduce_operators(const PodBasis& basis, const FemOperators& ops,
                                  const SensorSet* sensors = nullptr);

struct ReducedTrajectory {
  TimeGrid grid;
  Matrix coeffs;  // N_pod × (m+1)
};

/// Galerkin backward Euler in the reduced space; returns the coefficient
/// history and the lifted final state Φ c_m.
std::pair<ReducedTrajectory, Field> solve_reduced(const ReducedOperators& red, const PodBasis& basis,
                                                  const Field& f, const Field& g, const TimeGrid& grid);

/// e_pod = (h² + Δt|ln Δt| + √(T·ρ/Δt))².
double estimate_epod(double h, double dt, double T, double rho);

/// Basis persistence (JSON container with provenance; doubles round-trip).
struct BasisProvenance {
  std::vector<std::string> sources;
  double epsilon = 0.0;
  double h = 0.0;
  double dt = 0.0;
  double T = 0.0;
  bool includes_differences = false;
};

void save_basis(const PodBasis& basis, const BasisProvenance& provenance, const std::string& path);
PodBasis load_basis(const std::string& path, BasisProvenance* provenance_out = nullptr);

}  // namespace podinv
