#include <cstdlib>
#include <filesystem>
#include <iostream>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "podinv/experiment.hpp"

namespace {

using podinv::ExperimentConfig;

struct CliState {
  ExperimentConfig config;
  std::string stop_rule = "relative-update";
  std::string sweep_kind;
};

void add_common_options(CLI::App& cmd, CliState& state) {
  cmd.set_config("--config", "", "INI/TOML config file; flags override file values");

  auto* pde = cmd.add_option_group("pde", "discretization of the forward problem");
  pde->add_option("--pde.a", state.config.pde.a, "constant diffusion coefficient a(x)")
      ->capture_default_str();
  pde->add_option("--pde.c", state.config.pde.c, "constant reaction coefficient c(x)")
      ->capture_default_str();
  pde->add_option("--pde.T", state.config.pde.T, "final time")->capture_default_str();
  pde->add_option("--pde.dt", state.config.pde.dt, "time step (must divide T)")
      ->capture_default_str();
  pde->add_option("--pde.n_div", state.config.pde.n_div, "mesh divisions per side (h = 1/n_div)")
      ->capture_default_str();

  auto* snap = cmd.add_option_group("snapshots", "POD training stage");
  snap->add_option("--snapshots.sources", state.config.snapshots.sources,
                   "training sources, e.g. letter:A circle:0.5,0.5,0.1 (default letters A..O)")
      ->delimiter(',');
  snap->add_flag("--snapshots.include_differences,!--snapshots.solutions_only",
                 state.config.snapshots.include_differences,
                 "include difference-quotient snapshots (default on)");
  snap->add_option("--snapshots.epsilon", state.config.snapshots.epsilon,
                   "tail-energy threshold for the basis rank")
      ->capture_default_str();

  auto* sensors = cmd.add_option_group("sensors", "measurement model");
  sensors->add_option("--sensors.k", state.config.sensors.k, "k x k cell-centered sensor grid")
      ->capture_default_str();
  sensors->add_option("--sensors.sigma", state.config.sensors.sigma,
                      "noise standard deviation")
      ->capture_default_str();

  auto* inverse = cmd.add_option_group("inverse", "regularized descent");
  inverse->add_option("--inverse.lambda", state.config.inverse.lambda, "regularization parameter")
      ->capture_default_str();
  inverse->add_option("--inverse.alpha", state.config.inverse.alpha,
                      "step size; <= 0 selects 0.9/L automatically")
      ->capture_default_str();
  inverse->add_option("--inverse.tol", state.config.inverse.tol, "stopping tolerance")
      ->capture_default_str();
  inverse->add_option("--inverse.max_iter", state.config.inverse.max_iter, "iteration cap")
      ->capture_default_str();
  inverse->add_option("--inverse.stop_rule", state.stop_rule,
                      "objective | relative-update | gradient-norm")
      ->capture_default_str();

  auto* exp = cmd.add_option_group("experiment", "driver settings");
  exp->add_option("--engine", state.config.engine, "forward engine: pod | fem")
      ->capture_default_str();
  exp->add_option("--truth", state.config.truth, "ground-truth source spec")
      ->capture_default_str();
  exp->add_option("--trials", state.config.trials, "noisy trials per sweep point")
      ->capture_default_str();
  exp->add_option("--output-dir,-o", state.config.output_dir,
                  "output directory (relative paths resolve under $PODINV_OUTPUT_ROOT)")
      ->capture_default_str();
  exp->add_option("--base-seed", state.config.base_seed,
                  "trial t draws noise with seed base_seed + t")
      ->capture_default_str();
  exp->add_option("--threads", state.config.threads, "worker threads (0 = hardware)")
      ->capture_default_str();
  exp->add_option("--lambdas", state.config.lambdas, "sweep-lambda grid")->delimiter(',');
  exp->add_option("--npod-values", state.config.npod_values, "sweep-npod grid")->delimiter(',');
  exp->add_option("--h-divisions", state.config.h_divisions, "sweep-h mesh divisions")
      ->delimiter(',');
  exp->add_option("--reference-n_div", state.config.reference_n_div,
                  "sweep-h data-generating grid")
      ->capture_default_str();
  exp->add_option("--glyphs", state.config.glyph_path,
                  "glyph bitmap file (default: compiled-in copy of assets/glyphs16.txt)");
  exp->add_option("--basis", state.config.basis_path, "recover: load a saved basis.json");
}

void resolve_output_dir(ExperimentConfig& config) {
  const char* root = std::getenv("PODINV_OUTPUT_ROOT");
  if (root && *root && std::filesystem::path(config.output_dir).is_relative())
    config.output_dir = (std::filesystem::path(root) / config.output_dir).string();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parabolic inverse source reconstruction with a POD-reduced forward solver"};
  app.require_subcommand(1);

  CliState state;
  auto* snapshots = app.add_subcommand("snapshots", "solve the training sources and report the snapshot set");
  auto* basis = app.add_subcommand("basis", "build and save the POD basis (basis.json + spectrum.csv)");
  auto* recover = app.add_subcommand("recover", "reconstruct the truth source from one noisy observation");
  auto* sweep = app.add_subcommand("sweep", "error sweeps over h, lambda or N_pod");
  auto* lambda_iter = app.add_subcommand("lambda-iter", "fixed-point iteration for the regularization parameter");
  auto* timing = app.add_subcommand("timing", "wall-clock comparison of the POD and FEM engines");

  for (CLI::App* cmd : {snapshots, basis, recover, sweep, lambda_iter, timing})
    add_common_options(*cmd, state);
  sweep->add_option("--kind", state.sweep_kind, "h | lambda | npod")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    state.config.inverse.stop_rule = podinv::parse_stop_rule(state.stop_rule);
    if (snapshots->parsed()) state.config.kind = podinv::ExperimentKind::snapshots;
    if (basis->parsed()) state.config.kind = podinv::ExperimentKind::basis;
    if (recover->parsed()) state.config.kind = podinv::ExperimentKind::recover;
    if (sweep->parsed()) state.config.kind = podinv::parse_experiment_kind(state.sweep_kind);
    if (lambda_iter->parsed()) state.config.kind = podinv::ExperimentKind::lambda_iter;
    if (timing->parsed()) state.config.kind = podinv::ExperimentKind::timing;
    if (sweep->parsed())
      podinv::require(state.config.kind == podinv::ExperimentKind::sweep_h ||
                          state.config.kind == podinv::ExperimentKind::sweep_lambda ||
                          state.config.kind == podinv::ExperimentKind::sweep_npod,
                      podinv::errc::parse_error, "sweep --kind must be h, lambda or npod");

    resolve_output_dir(state.config);
    podinv::run_experiment(state.config);
    std::cout << "wrote results to " << state.config.output_dir << "\n";
    return 0;
  } catch (const podinv::error& e) {
    nlohmann::ordered_json diagnostic{{"error", {{"code", podinv::to_string(e.code())},
                                                 {"message", e.what()}}}};
    std::cerr << diagnostic.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    nlohmann::ordered_json diagnostic{{"error", {{"code", "unexpected"}, {"message", e.what()}}}};
    std::cerr << diagnostic.dump() << "\n";
    return 2;
  }
}
