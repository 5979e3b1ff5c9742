#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <vector>

#include "podinv/error.hpp"

namespace podinv {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Points = Eigen::Matrix<double, Eigen::Dynamic, 2>;

/// Structured P1 triangulation of the unit square. Each grid cell is split
/// along its lower-left to upper-right diagonal; node (i,j) sits at
/// (i*h, j*h) with index j*(n_div+1)+i.
struct Mesh {
  Points nodes;                                    // node coordinates
  Eigen::Matrix<int, Eigen::Dynamic, 3> triangles; // node-index triples, CCW
  std::vector<bool> boundary_mask;                 // true on x=0/1 or y=0/1
  int n_div = 0;
  double h = 0.0;                                  // 1/n_div

  int node_count() const { return static_cast<int>(nodes.rows()); }
  int triangle_count() const { return static_cast<int>(triangles.rows()); }
  int node_index(int i, int j) const { return j * (n_div + 1) + i; }
};

using MeshPtr = std::shared_ptr<const Mesh>;

MeshPtr build_mesh(int n_div);

/// Nodal P1 coefficient vector bound to a mesh.
struct Field {
  MeshPtr mesh;
  Vector coeffs;

  Field() = default;
  Field(MeshPtr m, Vector c) : mesh(std::move(m)), coeffs(std::move(c)) {
    require(mesh && coeffs.size() == mesh->node_count(), errc::invalid_argument,
            "field length must match mesh node count");
  }
};

/// Zero field on a mesh.
Field zero_field(const MeshPtr& mesh);

/// Nodal interpolant of a callable.
Field make_field(const MeshPtr& mesh, const std::function<double(double, double)>& fn);

inline void require_same_mesh(const Field& u, const Field& v) {
  require(u.mesh.get() == v.mesh.get(), errc::incompatible_operands,
          "fields live on different meshes");
}

}  // namespace podinv
