#include <cmath>
#include <random>

#include "doctest.h"
#include "podinv/forward.hpp"

using namespace podinv;

namespace {

Field eigenfunction(const MeshPtr& mesh) {
  return make_field(mesh,
                    [](double x, double y) { return std::sin(M_PI * x) * std::sin(M_PI * y); });
}

Field random_dirichlet_field(const MeshPtr& mesh, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Vector coeffs(mesh->node_count());
  for (int i = 0; i < coeffs.size(); ++i)
    coeffs[i] = mesh->boundary_mask[i] ? 0.0 : normal(rng);
  return Field(mesh, coeffs);
}

}  // namespace

TEST_SUITE("forward") {
  TEST_CASE("time grid invariants") {
    const TimeGrid grid = TimeGrid::from_steps(1.0, 32);
    CHECK(grid.dt * grid.steps == doctest::Approx(grid.T).epsilon(1e-15));
    CHECK_THROWS_AS(TimeGrid::from_dt(1.0, 0.3), error);
    CHECK(TimeGrid::from_dt(1.0, 1.0 / 32).steps == 32);
  }

  TEST_CASE("zero source and zero initial data stay zero") {
    const auto mesh = build_mesh(6);
    const auto ops = assemble_operators(mesh, 1.0, 0.0);
    const auto traj = solve_full(ops, zero_field(mesh), zero_field(mesh), TimeGrid::from_steps(1.0, 8));
    REQUIRE(traj.states.size() == 9);
    for (const auto& state : traj.states) CHECK(state.cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("eigenfunction source matches the closed-form final state") {
    const auto mesh = build_mesh(32);
    const auto ops = assemble_operators(mesh, 1.0, 0.0);
    const auto traj =
        solve_full(ops, eigenfunction(mesh), zero_field(mesh), TimeGrid::from_steps(1.0, 32));
    const double kappa = 2.0 * M_PI * M_PI;
    const double amplitude = (1.0 - std::exp(-kappa)) / kappa;  // 0.05066059168563722
    const Field expected = make_field(mesh, [&](double x, double y) {
      return amplitude * std::sin(M_PI * x) * std::sin(M_PI * y);
    });
    const double max_err = (traj.states.back() - expected.coeffs).cwiseAbs().maxCoeff();
    CHECK(max_err < 5e-2);
  }

  TEST_CASE("pure decay of the first eigenmode matches exp(-pi^2) at T = 1/2") {
    // dt = 1/2048 keeps the backward-Euler exponent defect (~kappa^2 T dt/2)
    // inside the 5% band together with the O(h^2) eigenvalue shift
    const auto mesh = build_mesh(32);
    const auto ops = assemble_operators(mesh, 1.0, 0.0);
    const Field g = eigenfunction(mesh);
    const TimeGrid grid = TimeGrid::from_dt(0.5, 1.0 / 2048);
    const auto traj = solve_full(ops, zero_field(mesh), g, grid);
    const Field final_state(mesh, traj.states.back());
    const double ratio = l2_norm(ops, final_state) / l2_norm(ops, g);
    CHECK(ratio == doctest::Approx(std::exp(-M_PI * M_PI)).epsilon(0.05));
  }

  TEST_CASE("forward map equals point evaluation of the final state") {
    const auto mesh = build_mesh(8);
    const auto ops = assemble_operators(mesh, 1.0, 0.25);
    const TimeGrid grid = TimeGrid::from_steps(1.0, 8);
    const SensorSet sensors = make_sensor_grid(5);
    const Field f = make_field(mesh, [](double x, double y) { return x * (1 - x) * y; });
    const Field g = zero_field(mesh);

    const Vector mapped = forward_map_full(ops, f, g, grid, sensors);
    const auto traj = solve_full(ops, f, g, grid);
    const Vector by_hand = evaluate_at_points(traj.state_field(grid.steps), sensors.points);
    CHECK((mapped - by_hand).cwiseAbs().maxCoeff() == 0.0);

    const Vector zero_map = forward_map_full(ops, g, g, grid, sensors);
    CHECK(zero_map.cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("sensor value at the center for the eigenfunction source") {
    const auto mesh = build_mesh(32);
    const auto ops = assemble_operators(mesh, 1.0, 0.0);
    SensorSet center;
    center.points.resize(1, 2);
    center.points << 0.5, 0.5;
    const Vector value = forward_map_full(ops, eigenfunction(mesh), zero_field(mesh),
                                          TimeGrid::from_steps(1.0, 32), center);
    CHECK(value[0] == doctest::Approx(0.05066059168563722).epsilon(5e-3 / 0.0506));
  }

  TEST_CASE("solve is linear in the source") {
    const auto mesh = build_mesh(6);
    const auto ops = assemble_operators(mesh, 1.0, 0.1);
    const TimeGrid grid = TimeGrid::from_steps(0.5, 6);
    const Field f1 = make_field(mesh, [](double x, double y) { return x + y; });
    const Field f2 = make_field(mesh, [](double x, double y) { return std::cos(3 * x) * y; });
    const Field combo(mesh, 2.5 * f1.coeffs - 1.25 * f2.coeffs);
    const Field g = zero_field(mesh);

    const Vector u_combo = solve_full(ops, combo, g, grid).states.back();
    const Vector u1 = solve_full(ops, f1, g, grid).states.back();
    const Vector u2 = solve_full(ops, f2, g, grid).states.back();
    CHECK((u_combo - (2.5 * u1 - 1.25 * u2)).cwiseAbs().maxCoeff() < 1e-10);
  }

  TEST_CASE("homogeneous solve has a non-increasing L2 norm for any dt") {
    const auto mesh = build_mesh(8);
    const auto ops = assemble_operators(mesh, 1.0, 0.0);
    for (const double dt : {0.5, 0.05, 0.004}) {
      const TimeGrid grid = TimeGrid::from_dt(1.0, dt);
      const auto traj = solve_full(ops, zero_field(mesh), random_dirichlet_field(mesh, 17), grid);
      double prev = std::numeric_limits<double>::infinity();
      for (const auto& state : traj.states) {
        const double norm = l2_norm(ops, Field(mesh, state));
        CHECK(norm <= prev * (1 + 1e-14));
        prev = norm;
      }
    }
  }

  TEST_CASE("nonnegative source keeps nodal values nonnegative") {
    const auto mesh = build_mesh(32);
    const auto ops = assemble_operators(mesh, 1.0, 0.0);
    const Field f = make_field(mesh, [](double x, double y) {
      return (x > 0.3 && x < 0.5 && y > 0.6 && y < 0.8) ? 1.0 : 0.0;
    });
    const auto traj = solve_full(ops, f, zero_field(mesh), TimeGrid::from_steps(1.0, 32));
    for (const auto& state : traj.states) CHECK(state.minCoeff() >= -1e-12);
  }

  TEST_CASE("initial data must satisfy the Dirichlet condition") {
    const auto mesh = build_mesh(4);
    const auto ops = assemble_operators(mesh, 1.0, 0.0);
    const Field bad = make_field(mesh, [](double, double) { return 1.0; });
    CHECK_THROWS_AS(solve_full(ops, zero_field(mesh), bad, TimeGrid::from_steps(1.0, 4)), error);
  }

  TEST_CASE("mesh mismatch is rejected") {
    const auto ops = assemble_operators(build_mesh(4), 1.0, 0.0);
    const auto other = build_mesh(4);
    CHECK_THROWS_AS(solve_full(ops, zero_field(other), zero_field(other), TimeGrid::from_steps(1.0, 4)),
                    error);
  }
}
