#ifndef PHFEM_MESH_HPP
#define PHFEM_MESH_HPP

#include <Eigen/Dense>
#include <array>
#include <memory>
#include <vector>

namespace phfem {

enum class BoundaryTag { Dirichlet, NeumannLoaded, NeumannFree };

// A boundary facet: a point (1D) or an edge (2D), owned by exactly one cell.
struct Facet {
  std::vector<int> nodes;
  int cell = -1;
  Eigen::VectorXd normal;   // unit outward
  BoundaryTag tag = BoundaryTag::NeumannFree;
};

// Geometry of one boundary facet for surface integration.
struct FacetTrace {
  double measure = 0.0;     // edge length; 1 for a point facet
  Eigen::VectorXd normal;
  int cell = -1;
};

class Mesh {
public:
  int dim() const { return dim_; }
  int node_count() const { return static_cast<int>(nodes_.size()); }
  int cell_count() const { return static_cast<int>(cells_.size()); }

  const std::vector<Eigen::VectorXd>& nodes() const { return nodes_; }
  const std::vector<std::vector<int>>& cells() const { return cells_; }
  const std::vector<Facet>& facets() const { return facets_; }

  // Unique interior + boundary edges of a triangulation, and per-cell edge
  // ids in local order (0,1),(1,2),(2,0). Empty for interval meshes.
  const std::vector<std::array<int, 2>>& edges() const { return edges_; }
  const std::vector<std::array<int, 3>>& cell_edges() const { return cell_edges_; }

  double cell_measure(int cell) const;
  Eigen::VectorXd cell_centroid(int cell) const;
  // Vertex coordinates of a cell as columns of a d x nverts matrix.
  Eigen::MatrixXd cell_vertices(int cell) const;

  double facet_measure(int facet) const;
  Eigen::VectorXd facet_midpoint(int facet) const;
  double boundary_measure(BoundaryTag tag) const;

  friend Mesh interval_mesh(double L, int n, BoundaryTag left, BoundaryTag right);
  friend Mesh rect_tri_mesh(double Lx, double Ly, int nx, int ny, BoundaryTag left,
                            BoundaryTag right, BoundaryTag bottom, BoundaryTag top);

private:
  int dim_ = 0;
  std::vector<Eigen::VectorXd> nodes_;
  std::vector<std::vector<int>> cells_;
  std::vector<Facet> facets_;
  std::vector<std::array<int, 2>> edges_;
  std::vector<std::array<int, 3>> cell_edges_;
};

// n equal cells on [0, L]. Default tags follow the rod benchmark: velocity
// input at X = 0, traction input at X = L.
Mesh interval_mesh(double L, int n, BoundaryTag left = BoundaryTag::Dirichlet,
                   BoundaryTag right = BoundaryTag::NeumannLoaded);

// Structured triangulation of [0,Lx] x [0,Ly]: each grid rectangle is split
// along its lower-left -> upper-right diagonal (2 nx ny triangles,
// counterclockwise). Default tags follow the beam benchmark: clamped at
// x = 0, loaded at x = Lx, traction-free bottom and top.
Mesh rect_tri_mesh(double Lx, double Ly, int nx, int ny,
                   BoundaryTag left = BoundaryTag::Dirichlet,
                   BoundaryTag right = BoundaryTag::NeumannLoaded,
                   BoundaryTag bottom = BoundaryTag::NeumannFree,
                   BoundaryTag top = BoundaryTag::NeumannFree);

// Measure and outward normal of a boundary facet, for Sigma integrals.
FacetTrace facet_trace(const Mesh& mesh, int facet);

}  // namespace phfem

#endif
