#pragma once

#include <cstdint>

#include "podinv/inverse.hpp"
#include "podinv/sources.hpp"

namespace podinv {

struct PdeConfig {
  double a = 1.0;
  double c = 0.0;
  double T = 1.0;
  double dt = 1.0 / 32;
  int n_div = 32;
};

struct SnapshotConfig {
  std::vector<std::string> sources;  // SourceSpec strings; default letters A..O
  bool include_differences = true;
  double epsilon = 1e-4;
};

struct SensorConfig {
  int k = 100;
  double sigma = 1e-3;
};

enum class ExperimentKind {
  snapshots,
  basis,
  recover,
  sweep_h,
  sweep_lambda,
  sweep_npod,
  lambda_iter,
  timing,
};

ExperimentKind parse_experiment_kind(const std::string& name);
const char* to_string(ExperimentKind kind);

struct ExperimentConfig {
  PdeConfig pde;
  SnapshotConfig snapshots;
  SensorConfig sensors;
  ObjectiveConfig inverse;
  ExperimentKind kind = ExperimentKind::recover;
  std::string engine = "pod";  // recover/timing forward engine: pod | fem
  std::string truth = "letter:A";
  int trials = 20;
  std::string output_dir = "out";
  std::uint64_t base_seed = 2024;
  int threads = 0;  // 0 → hardware concurrency
  std::vector<double> lambdas;   // sweep-lambda grid; default 1e-4 .. 1e-10
  std::vector<int> npod_values;  // sweep-npod grid; default 5 .. basis rank
  std::vector<int> h_divisions;  // sweep-h grid; default 8,16,32
  int reference_n_div = 64;      // sweep-h data-generating grid
  std::string glyph_path;        // empty → compiled-in glyph set
  std::string basis_path;        // recover: reuse a saved basis

  void validate() const;
  std::vector<std::string> snapshot_sources_or_default() const;
};

/// Run one experiment, writing its result files under config.output_dir.
/// Deterministic outputs (JSON/CSV/PGM) depend only on the config and seeds;
/// wall-clock measurements go to a separate timing.json.
void run_experiment(const ExperimentConfig& config);

/// 8-bit binary PGM, row-major from the y=1 edge down, min-max normalized;
/// a constant field maps to all-zero bytes.
void export_field_image(const Field& field, const std::string& path);

void save_field_csv(const Field& field, const std::string& path);

/// Otsu's histogram threshold (256 bins between min and max).
double otsu_threshold(const Vector& values);

std::vector<bool> threshold_support(const Vector& values, double threshold);

double jaccard_overlap(const std::vector<bool>& a, const std::vector<bool>& b);

}  // namespace podinv
