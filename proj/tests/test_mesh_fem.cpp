#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "doctest.h"
#include "podinv/fem.hpp"

using namespace podinv;

namespace {

Matrix dense(const SparseMatrix& s) { return Matrix(s); }

}  // namespace

TEST_SUITE("mesh") {
  TEST_CASE("structured counts") {
    const auto mesh = build_mesh(2);
    CHECK(mesh->node_count() == 9);
    CHECK(mesh->triangle_count() == 8);
    int boundary = 0;
    for (const bool b : mesh->boundary_mask) boundary += b;
    CHECK(boundary == 8);
    CHECK(mesh->node_count() - boundary == 1);

    const auto fine = build_mesh(32);
    CHECK(fine->node_count() == 1089);
    CHECK(fine->triangle_count() == 2048);
    CHECK(fine->h == doctest::Approx(1.0 / 32).epsilon(1e-15));
  }

  TEST_CASE("n_div below 2 is rejected") {
    CHECK_THROWS_WITH_AS(build_mesh(1), doctest::Contains("n_div"), error);
    try {
      build_mesh(0);
      FAIL("expected an error");
    } catch (const error& e) {
      CHECK(e.code() == errc::invalid_argument);
    }
  }

  TEST_CASE("all triangles have positive signed area") {
    const auto mesh = build_mesh(5);
    for (int t = 0; t < mesh->triangle_count(); ++t) {
      const auto p0 = mesh->nodes.row(mesh->triangles(t, 0));
      const auto p1 = mesh->nodes.row(mesh->triangles(t, 1));
      const auto p2 = mesh->nodes.row(mesh->triangles(t, 2));
      const double area2 =
          (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]);
      CHECK(area2 > 0.0);
    }
  }

  TEST_CASE("boundary mask marks exactly the edge nodes") {
    const auto mesh = build_mesh(4);
    for (int i = 0; i < mesh->node_count(); ++i) {
      const double x = mesh->nodes(i, 0), y = mesh->nodes(i, 1);
      const bool edge = x == 0.0 || x == 1.0 || y == 0.0 || y == 1.0;
      CHECK(mesh->boundary_mask[i] == edge);
    }
  }
}

TEST_SUITE("fem") {
  TEST_CASE("mass entries sum to the domain area") {
    for (const int n : {3, 8, 17}) {
      const auto ops = assemble_operators(build_mesh(n), 1.0, 0.0);
      CHECK(dense(ops.mass).sum() == doctest::Approx(1.0).epsilon(1e-12));
    }
  }

  TEST_CASE("matrices are exactly symmetric") {
    const auto ops = assemble_operators(build_mesh(6), 2.0, 0.5);
    CHECK((dense(ops.mass) - dense(ops.mass).transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((dense(ops.stiffness) - dense(ops.stiffness).transpose()).cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("stiffness annihilates constants before elimination") {
    const auto ops = assemble_operators(build_mesh(9), 1.0, 0.0);
    const Vector ones = Vector::Ones(ops.mesh->node_count());
    CHECK((ops.stiffness * ones).cwiseAbs().maxCoeff() < 1e-12);
  }

  TEST_CASE("variable coefficient equal to a constant matches the exact assembly") {
    const auto mesh = build_mesh(7);
    const auto exact = assemble_operators(mesh, 3.0, 0.0);
    const auto midpoint = assemble_operators(mesh, Coefficient([](double, double) { return 3.0; }), 0.0);
    CHECK((dense(exact.stiffness) - dense(midpoint.stiffness)).cwiseAbs().maxCoeff() < 1e-13);
  }

  TEST_CASE("non-positive diffusion coefficient is rejected") {
    const auto mesh = build_mesh(4);
    try {
      assemble_operators(mesh, Coefficient([](double x, double) { return x - 0.4; }), 0.0);
      FAIL("expected an error");
    } catch (const error& e) {
      CHECK(e.code() == errc::coefficient_violation);
    }
  }

  TEST_CASE("smallest generalized eigenvalue approximates 2*pi^2") {
    const auto ops = assemble_operators(build_mesh(32), 1.0, 0.0);
    // dense generalized eigensolve on the eliminated system is the oracle
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> solver(dense(ops.stiffness_ff),
                                                            dense(ops.mass_ff));
    REQUIRE(solver.info() == Eigen::Success);
    const double smallest = solver.eigenvalues()[0];
    CHECK(smallest == doctest::Approx(2.0 * M_PI * M_PI).epsilon(0.02));
  }

  TEST_CASE("stiffness is PSD and PD on the free dofs") {
    const auto ops = assemble_operators(build_mesh(6), 1.0, 0.0);
    std::mt19937_64 rng(7);
    std::normal_distribution<double> normal;
    for (int trial = 0; trial < 100; ++trial) {
      Vector x(ops.mesh->node_count());
      for (int i = 0; i < x.size(); ++i) x[i] = normal(rng);
      CHECK(x.dot(ops.stiffness * x) >= -1e-12);
      Vector xf = restrict_to_free(ops, x);
      if (xf.norm() > 0) CHECK(xf.dot(ops.stiffness_ff * xf) > 0.0);
    }
  }

  TEST_CASE("point evaluation reproduces affine fields") {
    const auto mesh = build_mesh(8);
    const Field x1 = make_field(mesh, [](double x, double) { return x; });
    Points pts(1, 2);
    pts << 0.37, 0.83;
    CHECK(evaluate_at_points(x1, pts)[0] == doctest::Approx(0.37).epsilon(1e-12));

    const Field affine = make_field(mesh, [](double x, double y) { return 2.0 - 3.0 * x + 0.5 * y; });
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    Points random_pts(50, 2);
    for (int p = 0; p < 50; ++p) {
      random_pts(p, 0) = uniform(rng);
      random_pts(p, 1) = uniform(rng);
    }
    const Vector values = evaluate_at_points(affine, random_pts);
    for (int p = 0; p < 50; ++p) {
      const double expected = 2.0 - 3.0 * random_pts(p, 0) + 0.5 * random_pts(p, 1);
      CHECK(values[p] == doctest::Approx(expected).epsilon(1e-12));
    }
  }

  TEST_CASE("point evaluation is exact at the nodes") {
    const auto mesh = build_mesh(5);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> normal;
    Vector coeffs(mesh->node_count());
    for (int i = 0; i < coeffs.size(); ++i) coeffs[i] = normal(rng);
    const Field field(mesh, coeffs);
    const Vector at_nodes = evaluate_at_points(field, mesh->nodes);
    CHECK((at_nodes - coeffs).cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("points outside the closed square are rejected") {
    const auto mesh = build_mesh(4);
    const Field field = zero_field(mesh);
    Points outside(1, 2);
    outside << 1.5, 0.5;
    try {
      evaluate_at_points(field, outside);
      FAIL("expected an error");
    } catch (const error& e) {
      CHECK(e.code() == errc::out_of_domain);
    }
  }

  TEST_CASE("l2 inner product: constants, smooth fields, symmetry") {
    const auto mesh = build_mesh(32);
    const auto ops = assemble_operators(mesh, 1.0, 0.0);
    const Field one = make_field(mesh, [](double, double) { return 1.0; });
    CHECK(l2_inner(ops, one, one) == doctest::Approx(1.0).epsilon(1e-12));

    const Field eigen = make_field(
        mesh, [](double x, double y) { return std::sin(M_PI * x) * std::sin(M_PI * y); });
    CHECK(l2_inner(ops, eigen, eigen) == doctest::Approx(0.25).epsilon(1e-3 / 0.25));

    std::mt19937_64 rng(5);
    std::normal_distribution<double> normal;
    for (int trial = 0; trial < 10; ++trial) {
      Vector a(mesh->node_count()), b(mesh->node_count());
      for (int i = 0; i < a.size(); ++i) {
        a[i] = normal(rng);
        b[i] = normal(rng);
      }
      const Field u(mesh, a), v(mesh, b);
      CHECK(l2_inner(ops, u, v) == doctest::Approx(l2_inner(ops, v, u)).epsilon(1e-14));
    }
  }

  TEST_CASE("l2 norm of the interpolated eigenfunction converges at order 2") {
    std::vector<double> errors;
    for (const int n : {8, 16, 32}) {
      const auto mesh = build_mesh(n);
      const auto ops = assemble_operators(mesh, 1.0, 0.0);
      const Field eigen = make_field(
          mesh, [](double x, double y) { return std::sin(M_PI * x) * std::sin(M_PI * y); });
      errors.push_back(std::abs(l2_inner(ops, eigen, eigen) - 0.25));
    }
    const double order1 = std::log2(errors[0] / errors[1]);
    const double order2 = std::log2(errors[1] / errors[2]);
    CHECK(order1 > 1.7);
    CHECK(order2 > 1.7);
  }

  TEST_CASE("mesh mismatch is rejected") {
    const auto mesh_a = build_mesh(4);
    const auto mesh_b = build_mesh(4);
    const auto ops = assemble_operators(mesh_a, 1.0, 0.0);
    try {
      l2_inner(ops, zero_field(mesh_a), zero_field(mesh_b));
      FAIL("expected an error");
    } catch (const error& e) {
      CHECK(e.code() == errc::incompatible_operands);
    }
  }
}
