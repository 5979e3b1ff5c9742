#include "podinv/experiment.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

namespace podinv {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

double seconds_since(const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), errc::io_error, "cannot open " + path + " for writing");
  out << text;
  require(out.good(), errc::io_error, "write to " + path + " failed");
}

void write_json(const std::string& path, const json& doc) { write_text(path, doc.dump(1) + "\n"); }

void run_trials(int trials, int threads, const std::function<void(int)>& body) {
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, trials));
  if (threads == 1) {
    for (int t = 0; t < trials; ++t) body(t);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> workers;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  workers.reserve(threads);
  for (int w = 0; w < threads; ++w) {
    workers.emplace_back([&] {
      for (int t = next.fetch_add(1); t < trials; t = next.fetch_add(1)) {
        try {
          body(t);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& worker : workers) worker.join();
  if (failure) std::rethrow_exception(failure);
}

// Everything the experiment kinds share: discretization, sensors, truth and
// its clean sensor data on the configured grid.
struct Context {
  const ExperimentConfig* config;
  GlyphSet glyphs;
  MeshPtr mesh;
  FemOperators ops;
  TimeGrid grid;
  SensorSet sensors;
  Field truth;
  Vector clean;
};

Context make_context(const ExperimentConfig& config) {
  Context ctx;
  ctx.config = &config;
  ctx.glyphs = config.glyph_path.empty() ? GlyphSet::builtin() : GlyphSet::load(config.glyph_path);
  ctx.mesh = build_mesh(config.pde.n_div);
  ctx.ops = assemble_operators(ctx.mesh, config.pde.a, config.pde.c);
  ctx.grid = TimeGrid::from_dt(config.pde.T, config.pde.dt);
  ctx.sensors = make_sensor_grid(config.sensors.k);
  ctx.truth = resolve_source(SourceSpec::parse(config.truth), ctx.mesh, ctx.glyphs);
  ctx.clean = forward_map_full(ctx.ops, ctx.truth, zero_field(ctx.mesh), ctx.grid, ctx.sensors);
  return ctx;
}

std::vector<Trajectory> solve_sources(const FemOperators& ops, const TimeGrid& grid,
                                      const std::vector<std::string>& specs, const GlyphSet& glyphs) {
  FullSolver solver(ops, grid);
  const Field g = zero_field(ops.mesh);
  std::vector<Trajectory> trajectories;
  trajectories.reserve(specs.size());
  for (const auto& spec : specs)
    trajectories.push_back(solver.solve(resolve_source(SourceSpec::parse(spec), ops.mesh, glyphs), g));
  return trajectories;
}

struct BasisBundle {
  SnapshotSet snapshots;
  PodBasis basis;
  double build_seconds = 0.0;
};

BasisBundle build_basis_bundle(const Context& ctx) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto specs = ctx.config->snapshot_sources_or_default();
  const auto trajectories =
      solve_sources(ctx.ops, ctx.grid, specs, ctx.glyphs);
  BasisBundle bundle;
  bundle.snapshots =
      build_snapshot_set(trajectories, ctx.config->snapshots.include_differences, ctx.ops);
  bundle.basis = build_pod_basis(bundle.snapshots, ctx.config->snapshots.epsilon);
  bundle.build_seconds = seconds_since(t0);
  return bundle;
}

ReducedOperators truncate(const ReducedOperators& red, int rank) {
  require(rank >= 1 && rank <= red.rank(), errc::invalid_argument, "truncation rank out of range");
  ReducedOperators out;
  out.mesh = red.mesh;
  out.stiffness_r = red.stiffness_r.topLeftCorner(rank, rank);
  out.lift = red.lift.leftCols(rank);
  out.mass_lift = red.mass_lift.leftCols(rank);
  if (red.sensor_modes.size() > 0) out.sensor_modes = red.sensor_modes.leftCols(rank);
  return out;
}

struct Metrics {
  double sensor_error = 0.0;  // ‖S_h f̂ − S_h f*‖_n on the full-order map
  double l2_error = 0.0;
  double rel_l2_error = 0.0;
};

Metrics compute_metrics(const FemOperators& ops, const TimeGrid& grid, const SensorSet& sensors,
                        const Vector& clean, const Field& truth, const Field& f_hat,
                        const FullSolver* solver = nullptr) {
  Metrics m;
  const Field g = zero_field(ops.mesh);
  const Field final = solver ? solver->final_state(f_hat, g) : FullSolver(ops, grid).final_state(f_hat, g);
  m.sensor_error = empirical_norm(evaluate_at_points(final, sensors.points) - clean);
  const Field diff(ops.mesh, f_hat.coeffs - truth.coeffs);
  m.l2_error = l2_norm(ops, diff);
  const double truth_norm = l2_norm(ops, truth);
  m.rel_l2_error = truth_norm > 0.0 ? m.l2_error / truth_norm : m.l2_error;
  return m;
}

json config_echo(const ExperimentConfig& config) {
  return json{
      {"kind", to_string(config.kind)},
      {"pde", {{"a", config.pde.a}, {"c", config.pde.c}, {"T", config.pde.T},
               {"dt", config.pde.dt}, {"n_div", config.pde.n_div}}},
      {"snapshots", {{"sources", config.snapshot_sources_or_default()},
                     {"include_differences", config.snapshots.include_differences},
                     {"epsilon", config.snapshots.epsilon}}},
      {"sensors", {{"k", config.sensors.k}, {"sigma", config.sensors.sigma}}},
      {"inverse", {{"lambda", config.inverse.lambda}, {"alpha", config.inverse.alpha},
                   {"tol", config.inverse.tol}, {"max_iter", config.inverse.max_iter},
                   {"stop_rule", to_string(config.inverse.stop_rule)}}},
      {"engine", config.engine},
      {"truth", config.truth},
      {"trials", config.trials},
      {"base_seed", config.base_seed},
  };
}

std::unique_ptr<ForwardEngine> make_engine(const Context& ctx, const PodBasis* basis) {
  const Field g = zero_field(ctx.mesh);
  if (ctx.config->engine == "fem") return std::make_unique<FemEngine>(ctx.ops, ctx.grid, ctx.sensors, g);
  require(ctx.config->engine == "pod", errc::invalid_argument,
          "engine must be 'pod' or 'fem', got '" + ctx.config->engine + "'");
  require(basis != nullptr, errc::invalid_argument, "POD engine needs a basis");
  const ReducedOperators red = reduce_operators(*basis, ctx.ops, &ctx.sensors);
  return std::make_unique<PodEngine>(red, ctx.ops, ctx.grid, ctx.sensors, g);
}

void write_common_fields(const Context& ctx, const Field& f_hat, const fs::path& dir) {
  save_field_csv(f_hat, (dir / "f_hat.csv").string());
  export_field_image(f_hat, (dir / "f_hat.pgm").string());
  export_field_image(ctx.truth, (dir / "truth.pgm").string());
}

// ---------------------------------------------------------------- kinds ---

void run_snapshots(const Context& ctx, const fs::path& dir) {
  const auto specs = ctx.config->snapshot_sources_or_default();
  const auto trajectories = solve_sources(ctx.ops, ctx.grid, specs, ctx.glyphs);
  const SnapshotSet set =
      build_snapshot_set(trajectories, ctx.config->snapshots.include_differences, ctx.ops);

  std::string csv = "index,source,slot,l2_norm\n";
  for (int j = 0; j < set.count(); ++j) {
    const Field snap(ctx.mesh, set.snapshots.col(j));
    csv += std::to_string(j) + ',' + std::to_string(j / set.per_source) + ',' +
           std::to_string(j % set.per_source) + ',' + fmt_double(l2_norm(ctx.ops, snap)) + '\n';
  }
  write_text((dir / "snapshot_norms.csv").string(), csv);

  json summary = config_echo(*ctx.config);
  summary["snapshot_count"] = set.count();
  summary["per_source"] = set.per_source;
  summary["source_count"] = set.source_count;
  write_json((dir / "summary.json").string(), summary);
}

void run_basis(const Context& ctx, const fs::path& dir) {
  const BasisBundle bundle = build_basis_bundle(ctx);
  BasisProvenance provenance;
  provenance.sources = ctx.config->snapshot_sources_or_default();
  provenance.epsilon = ctx.config->snapshots.epsilon;
  provenance.h = ctx.mesh->h;
  provenance.dt = ctx.grid.dt;
  provenance.T = ctx.grid.T;
  provenance.includes_differences = ctx.config->snapshots.include_differences;
  save_basis(bundle.basis, provenance, (dir / "basis.json").string());

  const Vector& mu = bundle.basis.eigenvalues;
  const double total = mu.sum();
  std::string csv = "k,mu,tail_ratio\n";
  double tail = total;
  for (int k = 0; k < mu.size(); ++k) {
    tail -= mu[k];
    csv += std::to_string(k + 1) + ',' + fmt_double(mu[k]) + ',' +
           fmt_double(total > 0 ? tail / total : 0.0) + '\n';
  }
  write_text((dir / "spectrum.csv").string(), csv);

  json summary = config_echo(*ctx.config);
  summary["n_pod"] = bundle.basis.rank;
  summary["rho"] = bundle.basis.rho;
  summary["snapshot_count"] = bundle.snapshots.count();
  summary["epod"] =
      estimate_epod(ctx.mesh->h, ctx.grid.dt, ctx.grid.T, bundle.basis.rho);
  write_json((dir / "summary.json").string(), summary);
  write_json((dir / "timing.json").string(), json{{"basis_seconds", bundle.build_seconds}});
}

void run_recover(const Context& ctx, const fs::path& dir) {
  const ExperimentConfig& config = *ctx.config;
  json timing;

  BasisProvenance provenance;
  PodBasis basis;
  double basis_seconds = 0.0;
  if (config.engine == "pod") {
    if (!config.basis_path.empty()) {
      basis = load_basis(config.basis_path, &provenance);
      require(basis.mesh->n_div == ctx.mesh->n_div, errc::incompatible_operands,
              "saved basis was built on a different mesh");
      basis.mesh = ctx.mesh;  // rebind so fields share the context mesh
    } else {
      BasisBundle bundle = build_basis_bundle(ctx);
      basis = std::move(bundle.basis);
      basis_seconds = bundle.build_seconds;
    }
  }
  timing["basis_seconds"] = basis_seconds;

  const Observation obs = add_noise(ctx.clean, config.sensors.sigma, config.base_seed);
  save_observation_csv(obs, ctx.sensors, (dir / "observation.csv").string());

  const auto engine = make_engine(ctx, config.engine == "pod" ? &basis : nullptr);
  const InverseResult result =
      gradient_descent(*engine, obs, config.inverse, zero_field(ctx.mesh));
  timing["solve_seconds"] = result.solve_seconds;

  const Metrics metrics =
      compute_metrics(ctx.ops, ctx.grid, ctx.sensors, ctx.clean, ctx.truth, result.f_hat);
  const double threshold = otsu_threshold(result.f_hat.coeffs);
  const double jaccard = jaccard_overlap(threshold_support(result.f_hat.coeffs, threshold),
                                         threshold_support(ctx.truth.coeffs, 0.5));

  write_common_fields(ctx, result.f_hat, dir);
  std::string history = "iteration,objective\n";
  for (std::size_t i = 0; i < result.objective_history.size(); ++i)
    history += std::to_string(i) + ',' + fmt_double(result.objective_history[i]) + '\n';
  write_text((dir / "objective_history.csv").string(), history);

  json summary = config_echo(config);
  summary["engine"] = engine->name();
  if (config.engine == "pod") {
    summary["n_pod"] = basis.rank;
    summary["rho"] = basis.rho;
  }
  summary["iterations"] = result.iterations;
  summary["alpha_used"] = result.alpha_used;
  summary["final_objective"] = result.objective_history.back();
  summary["sensor_error"] = metrics.sensor_error;
  summary["l2_error"] = metrics.l2_error;
  summary["rel_l2_error"] = metrics.rel_l2_error;
  summary["otsu_threshold"] = threshold;
  summary["jaccard"] = jaccard;
  summary["noise_ratio"] = config.sensors.sigma / empirical_norm(ctx.clean);
  write_json((dir / "summary.json").string(), summary);
  write_json((dir / "timing.json").string(), timing);
}

struct SweepRow {
  double parameter = 0.0;
  int trial = 0;
  Metrics metrics;
  double seconds = 0.0;
};

void write_sweep_outputs(const std::string& parameter_name, const std::vector<SweepRow>& rows,
                         const std::vector<double>& parameter_values, const json& config_json,
                         const fs::path& dir) {
  std::string csv = parameter_name + ",trial,sensor_error,l2_error,rel_l2_error\n";
  for (const auto& row : rows) {
    csv += fmt_double(row.parameter) + ',' + std::to_string(row.trial) + ',' +
           fmt_double(row.metrics.sensor_error) + ',' + fmt_double(row.metrics.l2_error) + ',' +
           fmt_double(row.metrics.rel_l2_error) + '\n';
  }
  write_text((dir / "sweep.csv").string(), csv);

  json per_parameter = json::array();
  const int trials = rows.empty() ? 0 : static_cast<int>(rows.size() / parameter_values.size());
  int best_index = -1;
  double best_mean = 0.0;
  for (std::size_t p = 0; p < parameter_values.size(); ++p) {
    double mean_sensor = 0.0, mean_sq_sensor = 0.0, mean_rel = 0.0;
    for (int t = 0; t < trials; ++t) {
      const auto& m = rows[p * trials + t].metrics;
      mean_sensor += m.sensor_error;
      mean_sq_sensor += m.sensor_error * m.sensor_error;
      mean_rel += m.rel_l2_error;
    }
    if (trials > 0) {
      mean_sensor /= trials;
      mean_sq_sensor /= trials;
      mean_rel /= trials;
    }
    if (best_index < 0 || mean_rel < best_mean) {
      best_index = static_cast<int>(p);
      best_mean = mean_rel;
    }
    per_parameter.push_back(json{{parameter_name, parameter_values[p]},
                                 {"mean_sensor_error", mean_sensor},
                                 {"mean_sq_sensor_error", mean_sq_sensor},
                                 {"mean_rel_l2_error", mean_rel}});
  }

  json summary = config_json;
  summary["rows"] = per_parameter;
  summary["best_index"] = best_index;
  summary["interior_minimum"] =
      best_index > 0 && best_index + 1 < static_cast<int>(parameter_values.size());
  write_json((dir / "summary.json").string(), summary);

  std::string timing_csv = parameter_name + ",trial,seconds\n";
  for (const auto& row : rows)
    timing_csv += fmt_double(row.parameter) + ',' + std::to_string(row.trial) + ',' +
                  fmt_double(row.seconds) + '\n';
  write_text((dir / "timing.csv").string(), timing_csv);
}

void run_sweep_lambda(const Context& ctx, const fs::path& dir) {
  const ExperimentConfig& config = *ctx.config;
  std::vector<double> lambdas = config.lambdas;
  if (lambdas.empty())
    lambdas = {1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9, 1e-10};

  BasisBundle bundle = build_basis_bundle(ctx);
  const ReducedOperators red = reduce_operators(bundle.basis, ctx.ops, &ctx.sensors);
  const PodEngine engine(red, ctx.ops, ctx.grid, ctx.sensors, zero_field(ctx.mesh));

  std::vector<SweepRow> rows(lambdas.size() * config.trials);
  run_trials(config.trials, config.threads, [&](int trial) {
    const Observation obs =
        add_noise(ctx.clean, config.sensors.sigma, config.base_seed + trial);
    const FullSolver error_solver(ctx.ops, ctx.grid);
    for (std::size_t p = 0; p < lambdas.size(); ++p) {
      const auto t0 = std::chrono::steady_clock::now();
      const Field f_hat = solve_normal_equations(engine, obs, lambdas[p]);
      SweepRow& row = rows[p * config.trials + trial];
      row.parameter = lambdas[p];
      row.trial = trial;
      row.metrics = compute_metrics(ctx.ops, ctx.grid, ctx.sensors, ctx.clean, ctx.truth, f_hat,
                                    &error_solver);
      row.seconds = seconds_since(t0);
    }
  });

  json config_json = config_echo(config);
  config_json["n_pod"] = bundle.basis.rank;
  write_sweep_outputs("lambda", rows, lambdas, config_json, dir);
}

void run_sweep_npod(const Context& ctx, const fs::path& dir) {
  const ExperimentConfig& config = *ctx.config;
  BasisBundle bundle = build_basis_bundle(ctx);
  const EigenPairs pairs = correlation_eig(bundle.snapshots);

  std::vector<int> ranks = config.npod_values;
  if (ranks.empty()) {
    for (int k = 5; k <= bundle.basis.rank; ++k) ranks.push_back(k);
  }
  require(!ranks.empty(), errc::invalid_argument, "empty N_pod sweep");
  const int max_rank = *std::max_element(ranks.begin(), ranks.end());
  const PodBasis wide = build_basis(bundle.snapshots, pairs, max_rank);
  const ReducedOperators red = reduce_operators(wide, ctx.ops, &ctx.sensors);

  // one engine per rank, built once and shared read-only across trials
  std::vector<std::unique_ptr<PodEngine>> engines;
  engines.reserve(ranks.size());
  for (const int rank : ranks)
    engines.push_back(std::make_unique<PodEngine>(truncate(red, rank), ctx.ops, ctx.grid,
                                                  ctx.sensors, zero_field(ctx.mesh)));

  std::vector<SweepRow> rows(ranks.size() * config.trials);
  run_trials(config.trials, config.threads, [&](int trial) {
    const Observation obs =
        add_noise(ctx.clean, config.sensors.sigma, config.base_seed + trial);
    const FullSolver error_solver(ctx.ops, ctx.grid);
    for (std::size_t p = 0; p < ranks.size(); ++p) {
      const auto t0 = std::chrono::steady_clock::now();
      const Field f_hat = solve_normal_equations(*engines[p], obs, config.inverse.lambda);
      SweepRow& row = rows[p * config.trials + trial];
      row.parameter = ranks[p];
      row.trial = trial;
      row.metrics = compute_metrics(ctx.ops, ctx.grid, ctx.sensors, ctx.clean, ctx.truth, f_hat,
                                    &error_solver);
      row.seconds = seconds_since(t0);
    }
  });

  std::vector<double> parameters(ranks.begin(), ranks.end());
  json config_json = config_echo(config);
  config_json["full_rank"] = bundle.basis.rank;
  write_sweep_outputs("n_pod", rows, parameters, config_json, dir);
}

void run_sweep_h(const ExperimentConfig& config, const GlyphSet& glyphs, const fs::path& dir) {
  std::vector<int> divisions = config.h_divisions;
  if (divisions.empty()) divisions = {8, 16, 32};

  // data come from a finer reference grid so the h-dependence is visible
  ExperimentConfig ref_config = config;
  ref_config.pde.n_div = config.reference_n_div;
  Context ref = make_context(ref_config);

  std::vector<Observation> observations;
  observations.reserve(config.trials);
  for (int t = 0; t < config.trials; ++t)
    observations.push_back(add_noise(ref.clean, config.sensors.sigma, config.base_seed + t));

  std::vector<SweepRow> rows(divisions.size() * config.trials);
  for (std::size_t p = 0; p < divisions.size(); ++p) {
    ExperimentConfig level_config = config;
    level_config.pde.n_div = divisions[p];
    Context level = make_context(level_config);
    level.clean = ref.clean;  // reference data, level-h reconstruction
    BasisBundle bundle = build_basis_bundle(level);
    const ReducedOperators red = reduce_operators(bundle.basis, level.ops, &level.sensors);
    const PodEngine engine(red, level.ops, level.grid, level.sensors, zero_field(level.mesh));

    run_trials(config.trials, config.threads, [&](int trial) {
      const auto t0 = std::chrono::steady_clock::now();
      const FullSolver error_solver(level.ops, level.grid);
      const Field f_hat = solve_normal_equations(engine, observations[trial], config.inverse.lambda);
      SweepRow& row = rows[p * config.trials + trial];
      row.parameter = level.mesh->h;
      row.trial = trial;
      row.metrics = compute_metrics(level.ops, level.grid, level.sensors, ref.clean, level.truth,
                                    f_hat, &error_solver);
      row.seconds = seconds_since(t0);
    });
  }

  std::vector<double> parameters;
  for (const int d : divisions) parameters.push_back(1.0 / d);
  json config_json = config_echo(config);
  config_json["reference_n_div"] = config.reference_n_div;
  write_sweep_outputs("h", rows, parameters, config_json, dir);
}

void run_lambda_iter(const Context& ctx, const fs::path& dir) {
  const ExperimentConfig& config = *ctx.config;
  BasisBundle bundle;
  PodBasis basis;
  std::unique_ptr<ForwardEngine> engine;
  if (config.engine == "pod") {
    bundle = build_basis_bundle(ctx);
    basis = std::move(bundle.basis);
    engine = make_engine(ctx, &basis);
  } else {
    engine = make_engine(ctx, nullptr);
  }

  const Observation obs = add_noise(ctx.clean, config.sensors.sigma, config.base_seed);
  const LambdaIteration iteration = lambda_fixed_point(*engine, obs, 2, config.inverse);

  std::string csv = "outer,lambda,f_norm,residual\n";
  for (std::size_t j = 0; j < iteration.lambda_history.size(); ++j) {
    csv += std::to_string(j) + ',' + fmt_double(iteration.lambda_history[j]) + ',';
    if (j < iteration.f_norm_history.size())
      csv += fmt_double(iteration.f_norm_history[j]) + ',' + fmt_double(iteration.residual_history[j]);
    else
      csv += ",";
    csv += '\n';
  }
  write_text((dir / "lambda_history.csv").string(), csv);

  const Metrics metrics =
      compute_metrics(ctx.ops, ctx.grid, ctx.sensors, ctx.clean, ctx.truth, iteration.result.f_hat);
  write_common_fields(ctx, iteration.result.f_hat, dir);

  json summary = config_echo(config);
  summary["engine"] = engine->name();
  summary["converged"] = iteration.converged;
  summary["outer_iterations"] = iteration.f_norm_history.size();
  summary["lambda_initial"] = iteration.lambda_history.front();
  summary["lambda_final"] = iteration.lambda_history.back();
  summary["sensor_error"] = metrics.sensor_error;
  summary["rel_l2_error"] = metrics.rel_l2_error;
  write_json((dir / "summary.json").string(), summary);
  write_json((dir / "timing.json").string(),
             json{{"solve_seconds", iteration.result.solve_seconds}});
}

void run_timing(const Context& ctx, const fs::path& dir) {
  const ExperimentConfig& config = *ctx.config;
  const auto t_basis = std::chrono::steady_clock::now();
  BasisBundle bundle = build_basis_bundle(ctx);
  const ReducedOperators red = reduce_operators(bundle.basis, ctx.ops, &ctx.sensors);
  const double basis_seconds = seconds_since(t_basis);

  const Observation obs = add_noise(ctx.clean, config.sensors.sigma, config.base_seed);
  const Field f0 = zero_field(ctx.mesh);

  const PodEngine pod(red, ctx.ops, ctx.grid, ctx.sensors, f0);
  const InverseResult pod_result = gradient_descent(pod, obs, config.inverse, f0);
  const Metrics pod_metrics =
      compute_metrics(ctx.ops, ctx.grid, ctx.sensors, ctx.clean, ctx.truth, pod_result.f_hat);

  const FemEngine fem(ctx.ops, ctx.grid, ctx.sensors, f0);
  const InverseResult fem_result = gradient_descent(fem, obs, config.inverse, f0);
  const Metrics fem_metrics =
      compute_metrics(ctx.ops, ctx.grid, ctx.sensors, ctx.clean, ctx.truth, fem_result.f_hat);

  json summary = config_echo(config);
  summary["n_pod"] = bundle.basis.rank;
  summary["pod"] = json{{"iterations", pod_result.iterations},
                        {"sensor_error", pod_metrics.sensor_error},
                        {"rel_l2_error", pod_metrics.rel_l2_error}};
  summary["fem"] = json{{"iterations", fem_result.iterations},
                        {"sensor_error", fem_metrics.sensor_error},
                        {"rel_l2_error", fem_metrics.rel_l2_error}};
  write_json((dir / "summary.json").string(), summary);

  write_json((dir / "timing.json").string(),
             json{{"basis_seconds", basis_seconds},
                  {"pod_solve_seconds", pod_result.solve_seconds},
                  {"fem_solve_seconds", fem_result.solve_seconds},
                  {"speedup", fem_result.solve_seconds /
                                  std::max(pod_result.solve_seconds, 1e-12)}});
}

}  // namespace

ExperimentKind parse_experiment_kind(const std::string& name) {
  if (name == "snapshots") return ExperimentKind::snapshots;
  if (name == "basis") return ExperimentKind::basis;
  if (name == "recover") return ExperimentKind::recover;
  if (name == "sweep-h" || name == "h") return ExperimentKind::sweep_h;
  if (name == "sweep-lambda" || name == "lambda") return ExperimentKind::sweep_lambda;
  if (name == "sweep-npod" || name == "npod") return ExperimentKind::sweep_npod;
  if (name == "lambda-iter") return ExperimentKind::lambda_iter;
  if (name == "timing") return ExperimentKind::timing;
  detail::fail(errc::parse_error, "unknown experiment kind '" + name + "'");
}

const char* to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::snapshots: return "snapshots";
    case ExperimentKind::basis: return "basis";
    case ExperimentKind::recover: return "recover";
    case ExperimentKind::sweep_h: return "sweep-h";
    case ExperimentKind::sweep_lambda: return "sweep-lambda";
    case ExperimentKind::sweep_npod: return "sweep-npod";
    case ExperimentKind::lambda_iter: return "lambda-iter";
    case ExperimentKind::timing: return "timing";
  }
  return "unknown";
}

void ExperimentConfig::validate() const {
  require(pde.n_div >= 2, errc::invalid_argument, "pde.n_div must be >= 2");
  require(pde.a > 0.0, errc::invalid_argument, "pde.a must be positive");
  require(pde.c >= 0.0, errc::invalid_argument, "pde.c must be nonnegative");
  TimeGrid::from_dt(pde.T, pde.dt);  // throws unless dt divides T
  require(snapshots.epsilon > 0.0 && snapshots.epsilon < 1.0, errc::invalid_argument,
          "snapshots.epsilon must lie in (0,1)");
  require(sensors.k >= 2, errc::invalid_argument, "sensors.k must be >= 2");
  require(sensors.sigma >= 0.0, errc::invalid_argument, "sensors.sigma must be nonnegative");
  require(trials >= 1, errc::invalid_argument, "trials must be >= 1");
  require(engine == "pod" || engine == "fem", errc::invalid_argument,
          "engine must be 'pod' or 'fem'");
  inverse.validate();
  SourceSpec::parse(truth);
  for (const auto& spec : snapshot_sources_or_default()) SourceSpec::parse(spec);
}

std::vector<std::string> ExperimentConfig::snapshot_sources_or_default() const {
  if (!snapshots.sources.empty()) return snapshots.sources;
  std::vector<std::string> out;
  for (char letter = 'A'; letter <= 'O'; ++letter) out.push_back(std::string("letter:") + letter);
  return out;
}

void run_experiment(const ExperimentConfig& config) {
  config.validate();
  const fs::path dir(config.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  require(!ec, errc::io_error, "cannot create output directory " + dir.string());

  if (config.kind == ExperimentKind::sweep_h) {
    const GlyphSet glyphs =
        config.glyph_path.empty() ? GlyphSet::builtin() : GlyphSet::load(config.glyph_path);
    run_sweep_h(config, glyphs, dir);
    return;
  }

  const Context ctx = make_context(config);
  switch (config.kind) {
    case ExperimentKind::snapshots: run_snapshots(ctx, dir); break;
    case ExperimentKind::basis: run_basis(ctx, dir); break;
    case ExperimentKind::recover: run_recover(ctx, dir); break;
    case ExperimentKind::sweep_lambda: run_sweep_lambda(ctx, dir); break;
    case ExperimentKind::sweep_npod: run_sweep_npod(ctx, dir); break;
    case ExperimentKind::lambda_iter: run_lambda_iter(ctx, dir); break;
    case ExperimentKind::timing: run_timing(ctx, dir); break;
    case ExperimentKind::sweep_h: break;  // handled above
  }
}

void export_field_image(const Field& field, const std::string& path) {
  const Mesh& mesh = *field.mesh;
  const int side = mesh.n_div + 1;
  const double min = field.coeffs.minCoeff();
  const double max = field.coeffs.maxCoeff();
  const double range = max - min;

  std::string bytes;
  bytes.reserve(static_cast<std::size_t>(side) * side);
  for (int row = 0; row < side; ++row) {
    const int j = mesh.n_div - row;  // top row is the y=1 edge
    for (int i = 0; i < side; ++i) {
      unsigned char value = 0;
      if (range > 0.0) {
        const double v = (field.coeffs[mesh.node_index(i, j)] - min) / range;
        value = static_cast<unsigned char>(std::lround(255.0 * std::min(std::max(v, 0.0), 1.0)));
      }
      bytes.push_back(static_cast<char>(value));
    }
  }

  std::ofstream out(path, std::ios::binary);
  require(out.good(), errc::io_error, "cannot open " + path + " for writing");
  out << "P5\n" << side << ' ' << side << "\n255\n" << bytes;
  require(out.good(), errc::io_error, "write to " + path + " failed");
}

void save_field_csv(const Field& field, const std::string& path) {
  std::string csv = "x1,x2,value\n";
  for (int i = 0; i < field.mesh->node_count(); ++i) {
    csv += fmt_double(field.mesh->nodes(i, 0)) + ',' + fmt_double(field.mesh->nodes(i, 1)) + ',' +
           fmt_double(field.coeffs[i]) + '\n';
  }
  write_text(path, csv);
}

double otsu_threshold(const Vector& values) {
  const double min = values.minCoeff();
  const double max = values.maxCoeff();
  if (!(max > min)) return min;

  constexpr int kBins = 256;
  std::array<int, kBins> histogram{};
  for (int i = 0; i < values.size(); ++i) {
    int bin = static_cast<int>((values[i] - min) / (max - min) * kBins);
    bin = std::min(std::max(bin, 0), kBins - 1);
    ++histogram[bin];
  }

  const double total = static_cast<double>(values.size());
  double sum_all = 0.0;
  for (int b = 0; b < kBins; ++b) sum_all += b * static_cast<double>(histogram[b]);

  double best_variance = -1.0;
  int best_bin = 0;
  double weight_bg = 0.0, sum_bg = 0.0;
  for (int b = 0; b < kBins - 1; ++b) {
    weight_bg += histogram[b];
    if (weight_bg == 0.0) continue;
    const double weight_fg = total - weight_bg;
    if (weight_fg == 0.0) break;
    sum_bg += b * static_cast<double>(histogram[b]);
    const double mean_bg = sum_bg / weight_bg;
    const double mean_fg = (sum_all - sum_bg) / weight_fg;
    const double variance = weight_bg * weight_fg * (mean_bg - mean_fg) * (mean_bg - mean_fg);
    if (variance > best_variance) {
      best_variance = variance;
      best_bin = b;
    }
  }
  return min + (best_bin + 1) * (max - min) / kBins;
}

std::vector<bool> threshold_support(const Vector& values, double threshold) {
  std::vector<bool> support(values.size());
  for (int i = 0; i < values.size(); ++i) support[i] = values[i] > threshold;
  return support;
}

double jaccard_overlap(const std::vector<bool>& a, const std::vector<bool>& b) {
  require(a.size() == b.size(), errc::incompatible_operands, "support masks differ in length");
  std::size_t intersection = 0, union_count = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    intersection += (a[i] && b[i]);
    union_count += (a[i] || b[i]);
  }
  return union_count == 0 ? 1.0 : static_cast<double>(intersection) / static_cast<double>(union_count);
}

}  // namespace podinv
