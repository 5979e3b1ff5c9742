#include "podinv/pod.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

namespace podinv {

SnapshotSet make_snapshot_set(const MeshPtr& mesh, Matrix snapshots, const FemOperators& ops) {
  require(ops.mesh.get() == mesh.get(), errc::incompatible_operands,
          "snapshot mesh does not match the operators' mesh");
  require(snapshots.rows() == mesh->node_count(), errc::invalid_argument,
          "snapshot rows must equal the node count");
  require(snapshots.cols() >= 1, errc::invalid_argument, "snapshot set must be non-empty");
  SnapshotSet set;
  set.mesh = mesh;
  set.mass = ops.mass;
  set.snapshots = std::move(snapshots);
  set.source_count = 1;
  set.per_source = set.count();
  return set;
}

SnapshotSet build_snapshot_set(const std::vector<Trajectory>& trajectories, bool include_differences,
                               const FemOperators& ops) {
  require(!trajectories.empty(), errc::invalid_argument, "snapshot collection needs trajectories");
  const MeshPtr mesh = trajectories.front().mesh;
  const TimeGrid grid = trajectories.front().grid;
  for (const auto& traj : trajectories) {
    require(traj.mesh.get() == mesh.get(), errc::incompatible_operands,
            "all trajectories must share a mesh");
    require(traj.grid.steps == grid.steps && traj.grid.dt == grid.dt, errc::incompatible_operands,
            "all trajectories must share a time grid");
  }

  const int m = grid.steps;
  const int per_source = include_differences ? 2 * m + 1 : m;
  SnapshotSet set;
  set.mesh = mesh;
  set.mass = ops.mass;
  set.source_count = static_cast<int>(trajectories.size());
  set.per_source = per_source;
  set.includes_differences = include_differences;
  set.snapshots.resize(mesh->node_count(), per_source * set.source_count);

  int col = 0;
  for (const auto& traj : trajectories) {
    if (include_differences) {
      for (int k = 0; k <= m; ++k) set.snapshots.col(col++) = traj.states[k];
      for (int k = 1; k <= m; ++k)
        set.snapshots.col(col++) = (traj.states[k] - traj.states[k - 1]) / grid.dt;
    } else {
      for (int k = 1; k <= m; ++k) set.snapshots.col(col++) = traj.states[k];
    }
  }
  return set;
}

EigenPairs correlation_eig(const SnapshotSet& snapshots) {
  const int n_s = snapshots.count();
  const Matrix weighted = snapshots.mass * snapshots.snapshots;
  Matrix k = snapshots.snapshots.transpose() * weighted / static_cast<double>(n_s);
  k = 0.5 * (k + k.transpose());  // kill roundoff asymmetry

  Eigen::SelfAdjointEigenSolver<Matrix> solver(k);
  require(solver.info() == Eigen::Success, errc::numeric_failure,
          "correlation eigendecomposition did not converge");

  // SelfAdjointEigenSolver sorts ascending; flip to non-increasing and clamp
  // the roundoff negatives of the PSD Gram matrix to zero
  EigenPairs pairs;
  pairs.eigenvalues = solver.eigenvalues().reverse().cwiseMax(0.0);
  pairs.eigenvectors = solver.eigenvectors().rowwise().reverse();
  return pairs;
}

int select_rank(const Vector& eigenvalues, double epsilon) {
  require(epsilon > 0.0 && epsilon < 1.0, errc::invalid_argument, "epsilon must lie in (0,1)");
  require(eigenvalues.size() >= 1, errc::invalid_argument, "empty spectrum");
  const double total = eigenvalues.sum();
  require(total > 0.0, errc::degenerate_spectrum, "all-zero correlation spectrum");

  double tail = total;
  for (int k = 1; k <= eigenvalues.size(); ++k) {
    tail -= eigenvalues[k - 1];
    if (tail / total < epsilon) return k;
  }
  return static_cast<int>(eigenvalues.size());
}

PodBasis build_basis(const SnapshotSet& snapshots, const EigenPairs& pairs, int n_pod, double epsilon) {
  const int n_s = snapshots.count();
  require(n_pod >= 1 && n_pod <= n_s, errc::invalid_argument, "basis rank out of range");
  const double mu_max = pairs.eigenvalues[0];
  require(mu_max > 0.0, errc::degenerate_spectrum, "all-zero correlation spectrum");
  require(pairs.eigenvalues[n_pod - 1] > 1e-12 * mu_max, errc::rank_deficiency,
          "requested rank exceeds the numerical rank of the snapshot set");

  PodBasis basis;
  basis.mesh = snapshots.mesh;
  basis.eigenvalues = pairs.eigenvalues;
  basis.rank = n_pod;
  basis.epsilon = epsilon;
  const double total = pairs.eigenvalues.sum();
  basis.rho = pairs.eigenvalues.tail(pairs.eigenvalues.size() - n_pod).sum() / total;

  basis.modes.resize(snapshots.snapshots.rows(), n_pod);
  for (int k = 0; k < n_pod; ++k) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_s) * pairs.eigenvalues[k]);
    basis.modes.col(k) = scale * (snapshots.snapshots * pairs.eigenvectors.col(k));
    // deterministic sign: largest-magnitude coefficient positive
    int arg_max = 0;
    basis.modes.col(k).cwiseAbs().maxCoeff(&arg_max);
    if (basis.modes(arg_max, k) < 0.0) basis.modes.col(k) = -basis.modes.col(k);
  }
  return basis;
}

PodBasis build_pod_basis(const SnapshotSet& snapshots, double epsilon) {
  const EigenPairs pairs = correlation_eig(snapshots);
  const int rank = select_rank(pairs.eigenvalues, epsilon);
  return build_basis(snapshots, pairs, rank, epsilon);
}

double projection_error_ratio(const SnapshotSet& snapshots, const PodBasis& basis) {
  const Matrix weighted = snapshots.mass * snapshots.snapshots;        // M Y
  const Matrix coeffs = basis.modes.transpose() * weighted;            // Φᵀ M Y
  const Matrix residual = snapshots.snapshots - basis.modes * coeffs;  // Y - Φ ΦᵀM Y
  const double res_energy = (residual.transpose() * (snapshots.mass * residual)).trace();
  const double total_energy = (snapshots.snapshots.transpose() * weighted).trace();
  require(total_energy > 0.0, errc::degenerate_spectrum, "zero-energy snapshot set");
  return res_energy / total_energy;
}

ReducedOperators reduce_operators(const PodBasis& basis, const FemOperators& ops,
                                  const SensorSet* sensors) {
  require(basis.mesh.get() == ops.mesh.get(), errc::incompatible_operands,
          "basis and operators live on different meshes");
  ReducedOperators red;
  red.mesh = basis.mesh;
  red.lift = basis.modes;
  red.mass_lift = ops.mass * basis.modes;
  red.stiffness_r = basis.modes.transpose() * (ops.stiffness * basis.modes);
  red.stiffness_r = 0.5 * (red.stiffness_r + red.stiffness_r.transpose());
  if (sensors) {
    const SparseMatrix eval = point_eval_matrix(*basis.mesh, sensors->points);
    red.sensor_modes = eval * basis.modes;
  }
  return red;
}

std::pair<ReducedTrajectory, Field> solve_reduced(const ReducedOperators& red, const PodBasis& basis,
                                                  const Field& f, const Field& g, const TimeGrid& grid) {
  require(f.mesh.get() == red.mesh.get() && g.mesh.get() == red.mesh.get(),
          errc::incompatible_operands, "fields do not live on the reduced operators' mesh");
  const int rank = red.rank();
  const Matrix system = Matrix::Identity(rank, rank) + grid.dt * red.stiffness_r;
  const Eigen::LLT<Matrix> solver(system);
  require(solver.info() == Eigen::Success, errc::solver_failure, "reduced system not SPD");

  const Vector load = red.mass_lift.transpose() * f.coeffs;  // ΦᵀM f
  ReducedTrajectory traj;
  traj.grid = grid;
  traj.coeffs.resize(rank, grid.steps + 1);
  traj.coeffs.col(0) = red.mass_lift.transpose() * g.coeffs;  // L²-projection of g
  for (int k = 1; k <= grid.steps; ++k)
    traj.coeffs.col(k) = solver.solve(traj.coeffs.col(k - 1) + grid.dt * load);

  Field lifted(red.mesh, red.lift * traj.coeffs.col(grid.steps));
  return {std::move(traj), std::move(lifted)};
}

double estimate_epod(double h, double dt, double T, double rho) {
  require(h > 0.0 && dt > 0.0 && T > 0.0, errc::invalid_argument, "h, dt, T must be positive");
  require(rho >= 0.0 && rho <= 1.0, errc::invalid_argument, "rho must lie in [0,1]");
  const double root = h * h + dt * std::abs(std::log(dt)) + std::sqrt(T * rho / dt);
  return root * root;
}

void save_basis(const PodBasis& basis, const BasisProvenance& provenance, const std::string& path) {
  nlohmann::ordered_json doc;
  doc["format"] = "podinv-basis-v1";
  doc["n_div"] = basis.mesh->n_div;
  doc["rank"] = basis.rank;
  doc["rho"] = basis.rho;
  doc["epsilon"] = basis.epsilon;
  doc["provenance"] = {
      {"sources", provenance.sources}, {"epsilon", provenance.epsilon},
      {"h", provenance.h},             {"dt", provenance.dt},
      {"T", provenance.T},             {"includes_differences", provenance.includes_differences},
  };
  doc["eigenvalues"] = std::vector<double>(basis.eigenvalues.data(),
                                           basis.eigenvalues.data() + basis.eigenvalues.size());
  auto& modes = doc["modes"] = nlohmann::ordered_json::array();
  for (int k = 0; k < basis.rank; ++k)
    modes.push_back(std::vector<double>(basis.modes.col(k).data(),
                                        basis.modes.col(k).data() + basis.modes.rows()));

  std::ofstream out(path);
  require(out.good(), errc::io_error, "cannot open " + path + " for writing");
  out << doc.dump(1) << "\n";
  require(out.good(), errc::io_error, "write to " + path + " failed");
}

PodBasis load_basis(const std::string& path, BasisProvenance* provenance_out) {
  std::ifstream in(path);
  require(in.good(), errc::io_error, "cannot open " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    detail::fail(errc::parse_error, path + ": " + e.what());
  }
  require(doc.value("format", "") == "podinv-basis-v1", errc::parse_error,
          path + ": not a podinv basis container");

  PodBasis basis;
  basis.mesh = build_mesh(doc.at("n_div").get<int>());
  basis.rank = doc.at("rank").get<int>();
  basis.rho = doc.at("rho").get<double>();
  basis.epsilon = doc.at("epsilon").get<double>();
  const auto eigenvalues = doc.at("eigenvalues").get<std::vector<double>>();
  basis.eigenvalues = Eigen::Map<const Vector>(eigenvalues.data(), eigenvalues.size());
  const auto& modes = doc.at("modes");
  require(static_cast<int>(modes.size()) == basis.rank, errc::parse_error, path + ": rank mismatch");
  basis.modes.resize(basis.mesh->node_count(), basis.rank);
  for (int k = 0; k < basis.rank; ++k) {
    const auto column = modes[k].get<std::vector<double>>();
    require(static_cast<int>(column.size()) == basis.mesh->node_count(), errc::parse_error,
            path + ": mode length mismatch");
    basis.modes.col(k) = Eigen::Map<const Vector>(column.data(), column.size());
  }
  if (provenance_out) {
    const auto& p = doc.at("provenance");
    provenance_out->sources = p.at("sources").get<std::vector<std::string>>();
    provenance_out->epsilon = p.at("epsilon").get<double>();
    provenance_out->h = p.at("h").get<double>();
    provenance_out->dt = p.at("dt").get<double>();
    provenance_out->T = p.at("T").get<double>();
    provenance_out->includes_differences = p.at("includes_differences").get<bool>();
  }
  return basis;
}

}  // namespace podinv
