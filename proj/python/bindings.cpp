#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "podinv/experiment.hpp"

namespace py = pybind11;
using namespace podinv;

namespace {

Bitmap bitmap_from_array(const Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>& grid) {
  Bitmap bmp;
  bmp.rows = static_cast<int>(grid.rows());
  bmp.cols = static_cast<int>(grid.cols());
  bmp.bits.reserve(static_cast<std::size_t>(bmp.rows) * bmp.cols);
  for (int r = 0; r < bmp.rows; ++r)
    for (int c = 0; c < bmp.cols; ++c) bmp.bits.push_back(grid(r, c) != 0);
  return bmp;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "POD-accelerated reconstruction of parabolic source terms from "
            "noisy final-time point measurements";

  py::register_exception<error>(m, "Error");

  // ---- mesh / fem -------------------------------------------------------
  py::class_<Mesh, std::shared_ptr<Mesh>>(m, "Mesh")
      .def_readonly("nodes", &Mesh::nodes)
      .def_readonly("triangles", &Mesh::triangles)
      .def_readonly("boundary_mask", &Mesh::boundary_mask)
      .def_readonly("n_div", &Mesh::n_div)
      .def_readonly("h", &Mesh::h)
      .def_property_readonly("node_count", &Mesh::node_count)
      .def_property_readonly("triangle_count", &Mesh::triangle_count);

  m.def("build_mesh", &build_mesh, py::arg("n_div"));

  py::class_<Field>(m, "Field")
      .def(py::init<MeshPtr, Vector>(), py::arg("mesh"), py::arg("coeffs"))
      .def_readonly("mesh", &Field::mesh)
      .def_readonly("coeffs", &Field::coeffs);

  m.def("zero_field", &zero_field, py::arg("mesh"));
  m.def("make_field", &make_field, py::arg("mesh"), py::arg("fn"),
        "Nodal interpolant of a callable (x, y) -> value.");

  py::class_<FemOperators>(m, "FemOperators")
      .def_readonly("mesh", &FemOperators::mesh)
      .def_readonly("mass", &FemOperators::mass)
      .def_readonly("stiffness", &FemOperators::stiffness)
      .def_readonly("free_dofs", &FemOperators::free_dofs);

  m.def(
      "assemble_operators",
      [](const MeshPtr& mesh, py::object a, py::object c) {
        auto to_coefficient = [](py::object obj) {
          if (py::isinstance<py::float_>(obj) || py::isinstance<py::int_>(obj))
            return Coefficient(obj.cast<double>());
          return Coefficient(obj.cast<std::function<double(double, double)>>());
        };
        return assemble_operators(mesh, to_coefficient(a), to_coefficient(c));
      },
      py::arg("mesh"), py::arg("a") = 1.0, py::arg("c") = 0.0,
      "Assemble mass/stiffness; a and c may be constants or callables.");

  m.def("evaluate_at_points", &evaluate_at_points, py::arg("field"), py::arg("points"));
  m.def("l2_inner", &l2_inner, py::arg("ops"), py::arg("u"), py::arg("v"));
  m.def("l2_norm", &l2_norm, py::arg("ops"), py::arg("u"));

  // ---- forward ----------------------------------------------------------
  py::class_<TimeGrid>(m, "TimeGrid")
      .def_static("from_steps", &TimeGrid::from_steps, py::arg("T"), py::arg("m"))
      .def_static("from_dt", &TimeGrid::from_dt, py::arg("T"), py::arg("dt"))
      .def_readonly("T", &TimeGrid::T)
      .def_readonly("dt", &TimeGrid::dt)
      .def_readonly("steps", &TimeGrid::steps);

  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("mesh", &Trajectory::mesh)
      .def_readonly("grid", &Trajectory::grid)
      .def_readonly("states", &Trajectory::states)
      .def("state_field", &Trajectory::state_field, py::arg("k"));

  m.def("solve_full", &solve_full, py::arg("ops"), py::arg("f"), py::arg("g"), py::arg("grid"));
  m.def("forward_map_full", &forward_map_full, py::arg("ops"), py::arg("f"), py::arg("g"),
        py::arg("grid"), py::arg("sensors"));

  // ---- sensors ----------------------------------------------------------
  py::class_<SensorSet>(m, "SensorSet")
      .def(py::init([](const Points& points) { return SensorSet{points}; }), py::arg("points"))
      .def_readonly("points", &SensorSet::points)
      .def_property_readonly("count", &SensorSet::count);

  m.def("make_sensor_grid", &make_sensor_grid, py::arg("k"));
  m.def("uniformity_ratio", &uniformity_ratio, py::arg("sensors"), py::arg("probe_resolution") = 256);
  m.def("empirical_inner", &empirical_inner, py::arg("u"), py::arg("v"));
  m.def("empirical_norm", &empirical_norm, py::arg("u"));

  py::enum_<NoiseKind>(m, "NoiseKind")
      .value("gaussian", NoiseKind::gaussian)
      .value("uniform", NoiseKind::uniform);

  py::class_<Observation>(m, "Observation")
      .def(py::init([](Vector values, double sigma, std::uint64_t seed) {
             return Observation{std::move(values), sigma, seed};
           }),
           py::arg("values"), py::arg("sigma") = 0.0, py::arg("seed") = 0)
      .def_readonly("values", &Observation::values)
      .def_readonly("sigma", &Observation::sigma)
      .def_readonly("seed", &Observation::seed);

  m.def("add_noise", &add_noise, py::arg("clean"), py::arg("sigma"), py::arg("seed"),
        py::arg("kind") = NoiseKind::gaussian);
  m.def("save_observation_csv", &save_observation_csv, py::arg("obs"), py::arg("sensors"),
        py::arg("path"));

  // ---- sources ----------------------------------------------------------
  m.def("circle_source", &circle_source, py::arg("mesh"), py::arg("cx"), py::arg("cy"),
        py::arg("radius"), py::arg("amplitude") = 1.0);
  m.def("ring_circle_center", &ring_circle_center, py::arg("theta"));
  m.def(
      "letter_source",
      [](const std::string& letter, const MeshPtr& mesh, double amplitude) {
        require(letter.size() == 1, errc::invalid_argument, "letter must be a single character");
        return letter_source(letter[0], mesh, GlyphSet::builtin(), amplitude);
      },
      py::arg("letter"), py::arg("mesh"), py::arg("amplitude") = 1.0);
  m.def(
      "bitmap_source",
      [](const Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>& grid,
         const std::array<double, 4>& region, const MeshPtr& mesh, double amplitude) {
        return bitmap_source(bitmap_from_array(grid), Box{region[0], region[1], region[2], region[3]},
                             mesh, amplitude);
      },
      py::arg("grid"), py::arg("region"), py::arg("mesh"), py::arg("amplitude") = 1.0,
      "Indicator of a 0/1 raster (row 0 = top) over region (x0, y0, x1, y1).");
  m.def(
      "source_from_spec",
      [](const std::string& spec, const MeshPtr& mesh) {
        return resolve_source(SourceSpec::parse(spec), mesh);
      },
      py::arg("spec"), py::arg("mesh"), "Resolve a spec string such as 'letter:A'.");

  // ---- pod --------------------------------------------------------------
  py::class_<SnapshotSet>(m, "SnapshotSet")
      .def_readonly("snapshots", &SnapshotSet::snapshots)
      .def_readonly("source_count", &SnapshotSet::source_count)
      .def_readonly("per_source", &SnapshotSet::per_source)
      .def_readonly("includes_differences", &SnapshotSet::includes_differences)
      .def_property_readonly("count", &SnapshotSet::count);

  m.def("build_snapshot_set", &build_snapshot_set, py::arg("trajectories"),
        py::arg("include_differences"), py::arg("ops"));
  m.def("make_snapshot_set", &make_snapshot_set, py::arg("mesh"), py::arg("snapshots"),
        py::arg("ops"));
  m.def(
      "correlation_eig",
      [](const SnapshotSet& snaps) {
        const EigenPairs pairs = correlation_eig(snaps);
        return std::make_pair(pairs.eigenvalues, pairs.eigenvectors);
      },
      py::arg("snapshots"));
  m.def("select_rank", &select_rank, py::arg("eigenvalues"), py::arg("epsilon"));

  py::class_<PodBasis>(m, "PodBasis")
      .def_readonly("mesh", &PodBasis::mesh)
      .def_readonly("modes", &PodBasis::modes)
      .def_readonly("eigenvalues", &PodBasis::eigenvalues)
      .def_readonly("rank", &PodBasis::rank)
      .def_readonly("rho", &PodBasis::rho)
      .def_readonly("epsilon", &PodBasis::epsilon);

  m.def(
      "build_basis",
      [](const SnapshotSet& snaps, const Vector& eigenvalues, const Matrix& eigenvectors, int n_pod) {
        return build_basis(snaps, EigenPairs{eigenvalues, eigenvectors}, n_pod);
      },
      py::arg("snapshots"), py::arg("eigenvalues"), py::arg("eigenvectors"), py::arg("n_pod"));
  m.def("build_pod_basis", &build_pod_basis, py::arg("snapshots"), py::arg("epsilon"));
  m.def("projection_error_ratio", &projection_error_ratio, py::arg("snapshots"), py::arg("basis"));

  py::class_<ReducedOperators>(m, "ReducedOperators")
      .def_readonly("stiffness_r", &ReducedOperators::stiffness_r)
      .def_readonly("lift", &ReducedOperators::lift)
      .def_readonly("sensor_modes", &ReducedOperators::sensor_modes)
      .def_property_readonly("rank", &ReducedOperators::rank);

  m.def(
      "reduce_operators",
      [](const PodBasis& basis, const FemOperators& ops, const SensorSet* sensors) {
        return reduce_operators(basis, ops, sensors);
      },
      py::arg("basis"), py::arg("ops"), py::arg("sensors") = nullptr);

  py::class_<ReducedTrajectory>(m, "ReducedTrajectory")
      .def_readonly("grid", &ReducedTrajectory::grid)
      .def_readonly("coeffs", &ReducedTrajectory::coeffs);

  m.def("solve_reduced", &solve_reduced, py::arg("red"), py::arg("basis"), py::arg("f"),
        py::arg("g"), py::arg("grid"));
  m.def("estimate_epod", &estimate_epod, py::arg("h"), py::arg("dt"), py::arg("T"), py::arg("rho"));

  py::class_<BasisProvenance>(m, "BasisProvenance")
      .def(py::init<>())
      .def_readwrite("sources", &BasisProvenance::sources)
      .def_readwrite("epsilon", &BasisProvenance::epsilon)
      .def_readwrite("h", &BasisProvenance::h)
      .def_readwrite("dt", &BasisProvenance::dt)
      .def_readwrite("T", &BasisProvenance::T)
      .def_readwrite("includes_differences", &BasisProvenance::includes_differences);

  m.def("save_basis", &save_basis, py::arg("basis"), py::arg("provenance"), py::arg("path"));
  m.def(
      "load_basis", [](const std::string& path) { return load_basis(path); }, py::arg("path"));

  // ---- inverse ----------------------------------------------------------
  py::enum_<StopRule>(m, "StopRule")
      .value("objective", StopRule::objective_below_tol)
      .value("relative_update", StopRule::relative_update_below_tol)
      .value("gradient_norm", StopRule::gradient_norm_below_tol);

  py::class_<ObjectiveConfig>(m, "ObjectiveConfig")
      .def(py::init<>())
      .def_readwrite("lambda_n", &ObjectiveConfig::lambda)
      .def_readwrite("alpha", &ObjectiveConfig::alpha)
      .def_readwrite("tol", &ObjectiveConfig::tol)
      .def_readwrite("max_iter", &ObjectiveConfig::max_iter)
      .def_readwrite("stop_rule", &ObjectiveConfig::stop_rule);

  py::class_<ForwardEngine>(m, "ForwardEngine")
      .def("forward", [](const ForwardEngine& e, const Vector& f) { return e.forward(f); })
      .def("adjoint", [](const ForwardEngine& e, const Vector& r) { return e.adjoint(r); })
      .def_property_readonly("offset", &ForwardEngine::offset)
      .def_property_readonly("sensor_count", &ForwardEngine::sensor_count)
      .def_property_readonly("name", &ForwardEngine::name);

  py::class_<FemEngine, ForwardEngine>(m, "FemEngine")
      .def(py::init<const FemOperators&, const TimeGrid&, const SensorSet&, const Field&>(),
           py::arg("ops"), py::arg("grid"), py::arg("sensors"), py::arg("g"),
           py::keep_alive<1, 2>());

  py::class_<PodEngine, ForwardEngine>(m, "PodEngine")
      .def(py::init<const ReducedOperators&, const FemOperators&, const TimeGrid&,
                    const SensorSet&, const Field&>(),
           py::arg("red"), py::arg("ops"), py::arg("grid"), py::arg("sensors"), py::arg("g"));

  m.def("objective_value", &objective_value, py::arg("engine"), py::arg("f"), py::arg("obs"),
        py::arg("lambda_n"));
  m.def("objective_gradient", &objective_gradient, py::arg("engine"), py::arg("f"), py::arg("obs"),
        py::arg("lambda_n"));
  m.def("estimate_step_bound", &estimate_step_bound, py::arg("engine"), py::arg("lambda_n"),
        py::arg("iterations") = 30, py::arg("seed") = 0x9e3779b97f4a7c15ULL);

  py::class_<InverseResult>(m, "InverseResult")
      .def_readonly("f_hat", &InverseResult::f_hat)
      .def_readonly("objective_history", &InverseResult::objective_history)
      .def_readonly("iterations", &InverseResult::iterations)
      .def_readonly("lambda_used", &InverseResult::lambda_used)
      .def_readonly("alpha_used", &InverseResult::alpha_used)
      .def_readonly("solve_seconds", &InverseResult::solve_seconds);

  m.def("gradient_descent", &gradient_descent, py::arg("engine"), py::arg("obs"),
        py::arg("config"), py::arg("f0"));
  m.def("solve_normal_equations", &solve_normal_equations, py::arg("engine"), py::arg("obs"),
        py::arg("lambda_n"));

  py::class_<LambdaIteration>(m, "LambdaIteration")
      .def_readonly("lambda_history", &LambdaIteration::lambda_history)
      .def_readonly("f_norm_history", &LambdaIteration::f_norm_history)
      .def_readonly("residual_history", &LambdaIteration::residual_history)
      .def_readonly("result", &LambdaIteration::result)
      .def_readonly("converged", &LambdaIteration::converged);

  m.def("lambda_fixed_point", &lambda_fixed_point, py::arg("engine"), py::arg("obs"),
        py::arg("dim"), py::arg("inner_config"), py::arg("max_outer") = 20);

  // ---- experiment -------------------------------------------------------
  py::enum_<ExperimentKind>(m, "ExperimentKind")
      .value("snapshots", ExperimentKind::snapshots)
      .value("basis", ExperimentKind::basis)
      .value("recover", ExperimentKind::recover)
      .value("sweep_h", ExperimentKind::sweep_h)
      .value("sweep_lambda", ExperimentKind::sweep_lambda)
      .value("sweep_npod", ExperimentKind::sweep_npod)
      .value("lambda_iter", ExperimentKind::lambda_iter)
      .value("timing", ExperimentKind::timing);

  py::class_<PdeConfig>(m, "PdeConfig")
      .def(py::init<>())
      .def_readwrite("a", &PdeConfig::a)
      .def_readwrite("c", &PdeConfig::c)
      .def_readwrite("T", &PdeConfig::T)
      .def_readwrite("dt", &PdeConfig::dt)
      .def_readwrite("n_div", &PdeConfig::n_div);

  py::class_<SnapshotConfig>(m, "SnapshotConfig")
      .def(py::init<>())
      .def_readwrite("sources", &SnapshotConfig::sources)
      .def_readwrite("include_differences", &SnapshotConfig::include_differences)
      .def_readwrite("epsilon", &SnapshotConfig::epsilon);

  py::class_<SensorConfig>(m, "SensorConfig")
      .def(py::init<>())
      .def_readwrite("k", &SensorConfig::k)
      .def_readwrite("sigma", &SensorConfig::sigma);

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_readwrite("pde", &ExperimentConfig::pde)
      .def_readwrite("snapshots", &ExperimentConfig::snapshots)
      .def_readwrite("sensors", &ExperimentConfig::sensors)
      .def_readwrite("inverse", &ExperimentConfig::inverse)
      .def_readwrite("kind", &ExperimentConfig::kind)
      .def_readwrite("engine", &ExperimentConfig::engine)
      .def_readwrite("truth", &ExperimentConfig::truth)
      .def_readwrite("trials", &ExperimentConfig::trials)
      .def_readwrite("output_dir", &ExperimentConfig::output_dir)
      .def_readwrite("base_seed", &ExperimentConfig::base_seed)
      .def_readwrite("threads", &ExperimentConfig::threads)
      .def_readwrite("lambdas", &ExperimentConfig::lambdas)
      .def_readwrite("npod_values", &ExperimentConfig::npod_values)
      .def_readwrite("h_divisions", &ExperimentConfig::h_divisions)
      .def_readwrite("reference_n_div", &ExperimentConfig::reference_n_div)
      .def_readwrite("glyph_path", &ExperimentConfig::glyph_path)
      .def_readwrite("basis_path", &ExperimentConfig::basis_path);

  m.def("run_experiment", &run_experiment, py::arg("config"),
        py::call_guard<py::gil_scoped_release>());
  m.def("export_field_image", &export_field_image, py::arg("field"), py::arg("path"));
  m.def("save_field_csv", &save_field_csv, py::arg("field"), py::arg("path"));
  m.def("otsu_threshold", &otsu_threshold, py::arg("values"));
  m.def("jaccard_overlap", &jaccard_overlap, py::arg("a"), py::arg("b"));
}
