#pragma once

#include <Eigen/Sparse>
#include <functional>
#include <optional>

#include "podinv/mesh.hpp"

namespace podinv {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Scalar coefficient field, either a constant (assembled exactly) or a
/// callable (assembled with the one-point midpoint rule).
class Coefficient {
 public:
  Coefficient(double value) : value_(value) {}  // NOLINT: implicit by design
  Coefficient(std::function<double(double, double)> fn) : fn_(std::move(fn)) {}

  bool is_constant() const { return !fn_; }
  double operator()(double x, double y) const { return fn_ ? fn_(x, y) : value_; }
  double constant_value() const { return value_; }

 private:
  double value_ = 0.0;
  std::function<double(double, double)> fn_;
};

/// Assembled P1 operators for a(u,ψ) = ∫ a∇u·∇ψ + c uψ with homogeneous
/// Dirichlet data handled by elimination (reduced system on free_dofs).
struct FemOperators {
  MeshPtr mesh;
  SparseMatrix mass;        // full L² mass matrix M
  SparseMatrix stiffness;   // full bilinear-form matrix A
  SparseMatrix mass_ff;     // M restricted to free dofs
  SparseMatrix stiffness_ff;
  std::vector<int> free_dofs;      // interior node indices, ascending
  std::vector<int> node_to_free;   // -1 for boundary nodes

  int free_count() const { return static_cast<int>(free_dofs.size()); }
};

FemOperators assemble_operators(const MeshPtr& mesh, const Coefficient& a, const Coefficient& c);

/// Piecewise-linear evaluation at arbitrary points of the closed unit square.
Vector evaluate_at_points(const Field& field, const Points& points);

/// Sparse point-evaluation operator (rows: points, cols: nodes). Row p holds
/// the barycentric weights of point p in its containing triangle.
SparseMatrix point_eval_matrix(const Mesh& mesh, const Points& points);

/// L²(Ω) inner product uᵀ M v.
double l2_inner(const FemOperators& ops, const Field& u, const Field& v);
double l2_norm(const FemOperators& ops, const Field& u);

/// Gather/scatter between full nodal vectors and free-dof vectors.
Vector restrict_to_free(const FemOperators& ops, const Vector& full);
Vector extend_from_free(const FemOperators& ops, const Vector& free_part);

}  // namespace podinv
