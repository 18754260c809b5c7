#include "phfem/mesh.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace phfem {

double Mesh::cell_measure(int cell) const {
  const auto& c = cells_.at(cell);
  if (dim_ == 1) return nodes_[c[1]](0) - nodes_[c[0]](0);
  const Eigen::VectorXd a = nodes_[c[1]] - nodes_[c[0]];
  const Eigen::VectorXd b = nodes_[c[2]] - nodes_[c[0]];
  return 0.5 * (a(0) * b(1) - a(1) * b(0));
}

Eigen::VectorXd Mesh::cell_centroid(int cell) const {
  const auto& c = cells_.at(cell);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(dim_);
  for (int n : c) x += nodes_[n];
  return x / static_cast<double>(c.size());
}

Eigen::MatrixXd Mesh::cell_vertices(int cell) const {
  const auto& c = cells_.at(cell);
  Eigen::MatrixXd V(dim_, static_cast<int>(c.size()));
  for (int k = 0; k < static_cast<int>(c.size()); ++k) V.col(k) = nodes_[c[k]];
  return V;
}

double Mesh::facet_measure(int facet) const {
  const auto& f = facets_.at(facet);
  if (dim_ == 1) return 1.0;  // point facet: boundary integrals are evaluations
  return (nodes_[f.nodes[1]] - nodes_[f.nodes[0]]).norm();
}

Eigen::VectorXd Mesh::facet_midpoint(int facet) const {
  const auto& f = facets_.at(facet);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(dim_);
  for (int n : f.nodes) x += nodes_[n];
  return x / static_cast<double>(f.nodes.size());
}

double Mesh::boundary_measure(BoundaryTag tag) const {
  double total = 0.0;
  for (int f = 0; f < static_cast<int>(facets_.size()); ++f)
    if (facets_[f].tag == tag) total += facet_measure(f);
  return total;
}

Mesh interval_mesh(double L, int n, BoundaryTag left, BoundaryTag right) {
  if (L <= 0.0) throw std::invalid_argument("interval_mesh: length must be positive");
  if (n < 1) throw std::invalid_argument("interval_mesh: need at least one cell");

  Mesh mesh;
  mesh.dim_ = 1;
  const double h = L / n;
  for (int i = 0; i <= n; ++i)
    mesh.nodes_.push_back(Eigen::VectorXd::Constant(1, i * h));
  for (int i = 0; i < n; ++i) mesh.cells_.push_back({i, i + 1});

  Facet fl;
  fl.nodes = {0};
  fl.cell = 0;
  fl.normal = Eigen::VectorXd::Constant(1, -1.0);
  fl.tag = left;
  Facet fr;
  fr.nodes = {n};
  fr.cell = n - 1;
  fr.normal = Eigen::VectorXd::Constant(1, 1.0);
  fr.tag = right;
  mesh.facets_ = {fl, fr};
  return mesh;
}

Mesh rect_tri_mesh(double Lx, double Ly, int nx, int ny, BoundaryTag left,
                   BoundaryTag right, BoundaryTag bottom, BoundaryTag top) {
  if (Lx <= 0.0 || Ly <= 0.0) throw std::invalid_argument("rect_tri_mesh: degenerate rectangle");
  if (nx < 1 || ny < 1) throw std::invalid_argument("rect_tri_mesh: need nx, ny >= 1");

  Mesh mesh;
  mesh.dim_ = 2;
  const double hx = Lx / nx;
  const double hy = Ly / ny;
  auto node_id = [nx](int i, int j) { return j * (nx + 1) + i; };

  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) {
      Eigen::VectorXd x(2);
      x << i * hx, j * hy;
      mesh.nodes_.push_back(x);
    }

  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int a = node_id(i, j), b = node_id(i + 1, j);
      const int c = node_id(i + 1, j + 1), d = node_id(i, j + 1);
      mesh.cells_.push_back({a, b, c});  // lower triangle
      mesh.cells_.push_back({a, c, d});  // upper triangle
    }

  // Unique edge enumeration (also provides node placement for quadratic spaces).
  std::map<std::pair<int, int>, int> edge_ids;
  auto edge_of = [&](int a, int b) {
    auto key = std::minmax(a, b);
    auto [it, inserted] = edge_ids.try_emplace(key, static_cast<int>(mesh.edges_.size()));
    if (inserted) mesh.edges_.push_back({key.first, key.second});
    return it->second;
  };
  for (const auto& c : mesh.cells_)
    mesh.cell_edges_.push_back({edge_of(c[0], c[1]), edge_of(c[1], c[2]), edge_of(c[2], c[0])});

  auto make_facet = [&](int a, int b, int cell, double nx_, double ny_) {
    Facet f;
    f.nodes = {a, b};
    f.cell = cell;
    f.normal = Eigen::Vector2d(nx_, ny_);
    mesh.facets_.push_back(f);
  };

  // Boundary edges, each attached to its unique owning triangle. Cell ids
  // follow the construction order above: rectangle (i, j) produced cells
  // 2 (j nx + i) and 2 (j nx + i) + 1.
  for (int i = 0; i < nx; ++i) {
    make_facet(node_id(i, 0), node_id(i + 1, 0), 2 * i, 0.0, -1.0);
    make_facet(node_id(i, ny), node_id(i + 1, ny), 2 * ((ny - 1) * nx + i) + 1, 0.0, 1.0);
  }
  for (int j = 0; j < ny; ++j) {
    make_facet(node_id(0, j), node_id(0, j + 1), 2 * (j * nx) + 1, -1.0, 0.0);
    make_facet(node_id(nx, j), node_id(nx, j + 1), 2 * (j * nx + nx - 1), 1.0, 0.0);
  }

  // Tag sides by midpoint coordinate.
  const double tol = 1e-10 * std::max(Lx, Ly);
  for (int f = 0; f < static_cast<int>(mesh.facets_.size()); ++f) {
    const Eigen::VectorXd mid = mesh.facet_midpoint(f);
    BoundaryTag tag;
    if (mid(0) < tol)
      tag = left;
    else if (mid(0) > Lx - tol)
      tag = right;
    else if (mid(1) < tol)
      tag = bottom;
    else
      tag = top;
    mesh.facets_[f].tag = tag;
  }
  return mesh;
}

FacetTrace facet_trace(const Mesh& mesh, int facet) {
  if (facet < 0 || facet >= static_cast<int>(mesh.facets().size()))
    throw std::out_of_range("facet_trace: no such boundary facet");
  FacetTrace t;
  t.measure = mesh.facet_measure(facet);
  t.normal = mesh.facets()[facet].normal;
  t.cell = mesh.facets()[facet].cell;
  return t;
}

}  // namespace phfem
