#include "podinv/mesh.hpp"

namespace podinv {

MeshPtr build_mesh(int n_div) {
  require(n_div >= 2, errc::invalid_argument, "build_mesh requires n_div >= 2");

  auto mesh = std::make_shared<Mesh>();
  mesh->n_div = n_div;
  mesh->h = 1.0 / n_div;

  const int side = n_div + 1;
  mesh->nodes.resize(side * side, 2);
  mesh->boundary_mask.assign(side * side, false);
  for (int j = 0; j < side; ++j) {
    for (int i = 0; i < side; ++i) {
      const int id = j * side + i;
      mesh->nodes(id, 0) = static_cast<double>(i) / n_div;
      mesh->nodes(id, 1) = static_cast<double>(j) / n_div;
      mesh->boundary_mask[id] = (i == 0 || i == n_div || j == 0 || j == n_div);
    }
  }

  mesh->triangles.resize(2 * n_div * n_div, 3);
  int t = 0;
  for (int j = 0; j < n_div; ++j) {
    for (int i = 0; i < n_div; ++i) {
      const int ll = j * side + i;
      const int lr = ll + 1;
      const int ul = ll + side;
      const int ur = ul + 1;
      // both CCW, split along the ll-ur diagonal
      mesh->triangles.row(t++) << ll, lr, ur;
      mesh->triangles.row(t++) << ll, ur, ul;
    }
  }
  return mesh;
}

Field zero_field(const MeshPtr& mesh) {
  return Field(mesh, Vector::Zero(mesh->node_count()));
}

Field make_field(const MeshPtr& mesh, const std::function<double(double, double)>& fn) {
  Vector c(mesh->node_count());
  for (int i = 0; i < mesh->node_count(); ++i) c[i] = fn(mesh->nodes(i, 0), mesh->nodes(i, 1));
  return Field(mesh, std::move(c));
}

}  // namespace podinv
