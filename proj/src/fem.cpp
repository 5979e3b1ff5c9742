#include "podinv/fem.hpp"

#include <array>
#include <cmath>

namespace podinv {

const char* to_string(errc code) noexcept {
  switch (code) {
    case errc::invalid_argument: return "invalid-argument";
    case errc::coefficient_violation: return "coefficient-violation";
    case errc::out_of_domain: return "out-of-domain";
    case errc::incompatible_operands: return "incompatible-operands";
    case errc::solver_failure: return "solver-failure";
    case errc::numeric_failure: return "numeric-failure";
    case errc::degenerate_spectrum: return "degenerate-spectrum";
    case errc::rank_deficiency: return "rank-deficiency";
    case errc::step_size_too_large: return "step-size-too-large";
    case errc::degenerate_iterate: return "degenerate-iterate";
    case errc::io_error: return "io-error";
    case errc::asset_not_found: return "asset-not-found";
    case errc::parse_error: return "parse-error";
  }
  return "unknown";
}

namespace {

using Triplet = Eigen::Triplet<double>;

SparseMatrix submatrix(const SparseMatrix& s, const std::vector<int>& map, int count) {
  std::vector<Triplet> trips;
  trips.reserve(s.nonZeros());
  for (int k = 0; k < s.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(s, k); it; ++it) {
      const int r = map[it.row()];
      const int c = map[it.col()];
      if (r >= 0 && c >= 0) trips.emplace_back(r, c, it.value());
    }
  }
  SparseMatrix out(count, count);
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

}  // namespace

FemOperators assemble_operators(const MeshPtr& mesh, const Coefficient& a, const Coefficient& c) {
  if (a.is_constant())
    require(a.constant_value() > 0.0, errc::coefficient_violation, "diffusion coefficient must be positive");
  if (c.is_constant())
    require(c.constant_value() >= 0.0, errc::coefficient_violation, "reaction coefficient must be nonnegative");

  const int n = mesh->node_count();
  std::vector<Triplet> mass_trips, stiff_trips;
  mass_trips.reserve(9 * mesh->triangle_count());
  stiff_trips.reserve(9 * mesh->triangle_count());

  for (int t = 0; t < mesh->triangle_count(); ++t) {
    const std::array<int, 3> v = {mesh->triangles(t, 0), mesh->triangles(t, 1), mesh->triangles(t, 2)};
    const double x0 = mesh->nodes(v[0], 0), y0 = mesh->nodes(v[0], 1);
    const double x1 = mesh->nodes(v[1], 0), y1 = mesh->nodes(v[1], 1);
    const double x2 = mesh->nodes(v[2], 0), y2 = mesh->nodes(v[2], 1);
    const double area2 = (x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0);  // 2*signed area
    require(area2 > 0.0, errc::invalid_argument, "degenerate or inverted triangle");
    const double area = 0.5 * area2;
    const double cx = (x0 + x1 + x2) / 3.0;
    const double cy = (y0 + y1 + y2) / 3.0;

    // constant coefficients are exact; otherwise one-point midpoint rule
    const double a_mid = a(cx, cy);
    const double c_mid = c(cx, cy);
    require(a_mid > 0.0, errc::coefficient_violation, "diffusion coefficient non-positive at quadrature point");
    require(c_mid >= 0.0, errc::coefficient_violation, "reaction coefficient negative at quadrature point");

    // grad φ_i = (b_i, g_i) / (2*area)
    const std::array<double, 3> b = {y1 - y2, y2 - y0, y0 - y1};
    const std::array<double, 3> g = {x2 - x1, x0 - x2, x1 - x0};

    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const double m_exact = area / 12.0 * (i == j ? 2.0 : 1.0);
        mass_trips.emplace_back(v[i], v[j], m_exact);

        double k = a_mid * (b[i] * b[j] + g[i] * g[j]) / (4.0 * area);
        if (c.is_constant()) {
          k += c_mid * m_exact;
        } else {
          k += c_mid * area / 9.0;  // φ_i(centroid) = 1/3
        }
        stiff_trips.emplace_back(v[i], v[j], k);
      }
    }
  }

  FemOperators ops;
  ops.mesh = mesh;
  ops.mass.resize(n, n);
  ops.mass.setFromTriplets(mass_trips.begin(), mass_trips.end());
  ops.stiffness.resize(n, n);
  ops.stiffness.setFromTriplets(stiff_trips.begin(), stiff_trips.end());

  ops.node_to_free.assign(n, -1);
  for (int i = 0; i < n; ++i) {
    if (!mesh->boundary_mask[i]) {
      ops.node_to_free[i] = static_cast<int>(ops.free_dofs.size());
      ops.free_dofs.push_back(i);
    }
  }
  ops.mass_ff = submatrix(ops.mass, ops.node_to_free, ops.free_count());
  ops.stiffness_ff = submatrix(ops.stiffness, ops.node_to_free, ops.free_count());
  return ops;
}

namespace {

// Locate the triangle containing (x,y) on the structured grid and return the
// three (node, barycentric weight) pairs.
struct EvalStencil {
  std::array<int, 3> nodes;
  std::array<double, 3> weights;
};

EvalStencil locate(const Mesh& mesh, double x, double y) {
  require(x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= 1.0, errc::out_of_domain,
          "evaluation point outside the closed unit square");
  const int n = mesh.n_div;
  int ci = std::min(static_cast<int>(x * n), n - 1);
  int cj = std::min(static_cast<int>(y * n), n - 1);
  const double xl = x * n - ci;
  const double yl = y * n - cj;
  const int side = n + 1;
  const int ll = cj * side + ci;
  const int lr = ll + 1;
  const int ul = ll + side;
  const int ur = ul + 1;
  if (yl <= xl) {
    // lower triangle (ll, lr, ur): u = u_ll + (u_lr-u_ll)x + (u_ur-u_lr)y
    return {{ll, lr, ur}, {1.0 - xl, xl - yl, yl}};
  }
  // upper triangle (ll, ur, ul)
  return {{ll, ur, ul}, {1.0 - yl, xl, yl - xl}};
}

}  // namespace

Vector evaluate_at_points(const Field& field, const Points& points) {
  const Mesh& mesh = *field.mesh;
  Vector out(points.rows());
  for (int p = 0; p < points.rows(); ++p) {
    const EvalStencil s = locate(mesh, points(p, 0), points(p, 1));
    out[p] = s.weights[0] * field.coeffs[s.nodes[0]] + s.weights[1] * field.coeffs[s.nodes[1]] +
             s.weights[2] * field.coeffs[s.nodes[2]];
  }
  return out;
}

SparseMatrix point_eval_matrix(const Mesh& mesh, const Points& points) {
  std::vector<Triplet> trips;
  trips.reserve(3 * points.rows());
  for (int p = 0; p < points.rows(); ++p) {
    const EvalStencil s = locate(mesh, points(p, 0), points(p, 1));
    for (int k = 0; k < 3; ++k) {
      if (s.weights[k] != 0.0) trips.emplace_back(p, s.nodes[k], s.weights[k]);
    }
  }
  SparseMatrix e(points.rows(), mesh.node_count());
  e.setFromTriplets(trips.begin(), trips.end());
  return e;
}

double l2_inner(const FemOperators& ops, const Field& u, const Field& v) {
  require_same_mesh(u, v);
  require(u.mesh.get() == ops.mesh.get(), errc::incompatible_operands,
          "fields do not live on the operators' mesh");
  return u.coeffs.dot(ops.mass * v.coeffs);
}

double l2_norm(const FemOperators& ops, const Field& u) {
  return std::sqrt(std::max(0.0, l2_inner(ops, u, u)));
}

Vector restrict_to_free(const FemOperators& ops, const Vector& full) {
  Vector out(ops.free_count());
  for (int k = 0; k < ops.free_count(); ++k) out[k] = full[ops.free_dofs[k]];
  return out;
}

Vector extend_from_free(const FemOperators& ops, const Vector& free_part) {
  Vector out = Vector::Zero(ops.mesh->node_count());
  for (int k = 0; k < ops.free_count(); ++k) out[ops.free_dofs[k]] = free_part[k];
  return out;
}

}  // namespace podinv
