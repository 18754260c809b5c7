#ifndef PHFEM_SPACE_HPP
#define PHFEM_SPACE_HPP

#include "phfem/basis.hpp"
#include "phfem/mesh.hpp"

#include <functional>
#include <memory>
#include <utility>

namespace phfem {

// Basis data on one cell at a set of reference points, with gradients
// mapped to physical coordinates.
struct CellShape {
  Eigen::MatrixXd values;               // npts x nloc
  std::vector<Eigen::MatrixXd> grads;   // per point: nloc x d (physical)
  double jacobian = 0.0;                // |det J| of the reference map
};

// Trace data on one boundary facet, evaluated from the owning cell.
struct FacetShape {
  Eigen::MatrixXd values;       // npts x nloc (owning-cell basis)
  Eigen::VectorXd weights;      // quadrature weights x facet measure
  Eigen::MatrixXd points;       // npts x d physical coordinates
  Eigen::VectorXd normal;       // unit outward
  int cell = -1;
};

// Vector- or Voigt-valued Lagrange space on a mesh. Scalar dofs are
// numbered deterministically (shared mesh entities for CG, cell-major for
// DG) and expanded component-minor: dof = scalar_dof * components + comp.
class FunctionSpace {
public:
  FunctionSpace(std::shared_ptr<const Mesh> mesh, BasisSpec spec);

  const Mesh& mesh() const { return *mesh_; }
  std::shared_ptr<const Mesh> mesh_ptr() const { return mesh_; }
  const BasisSpec& spec() const { return spec_; }
  ElemType elem_type() const { return elem_; }

  int components() const { return spec_.components; }
  int scalar_dofs() const { return n_scalar_; }
  int dofs() const { return n_scalar_ * spec_.components; }
  int local_scalar_dofs() const { return nloc_; }

  const std::vector<int>& cell_scalar_dofs(int cell) const { return cell_dofs_[cell]; }
  // Scalar dofs whose node lies on a facet with the given tag (CG spaces).
  const std::vector<int>& boundary_scalar_dofs(BoundaryTag tag) const;

  // Physical coordinates of the Lagrange nodes of one cell (rows).
  Eigen::MatrixXd cell_dof_points(int cell) const;

  CellShape cell_shape(int cell, const Eigen::MatrixXd& ref_points) const;
  // Facet quadrature of the requested polynomial exactness, with basis
  // traces taken from the owning cell.
  FacetShape facet_shape(int facet, int exactness_degree) const;

  // Nodal interpolation of a pointwise function X -> R^components.
  Eigen::VectorXd interpolate(
      const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f) const;

  // Cell containing X and its reference coordinates; throws if X is
  // outside the mesh.
  std::pair<int, Eigen::VectorXd> locate(const Eigen::VectorXd& X) const;
  Eigen::VectorXd evaluate(const Eigen::VectorXd& coeffs, const Eigen::VectorXd& X) const;
  Eigen::VectorXd evaluate_ref(const Eigen::VectorXd& coeffs, int cell,
                               const Eigen::VectorXd& ref) const;

  // Map reference coordinates of a cell to physical ones.
  Eigen::VectorXd ref_to_physical(int cell, const Eigen::VectorXd& ref) const;

private:
  std::shared_ptr<const Mesh> mesh_;
  BasisSpec spec_;
  ElemType elem_;
  int nloc_ = 0;
  int n_scalar_ = 0;
  std::vector<std::vector<int>> cell_dofs_;
  std::vector<std::vector<int>> boundary_dofs_;  // indexed by BoundaryTag
};

FunctionSpace build_space(std::shared_ptr<const Mesh> mesh, BasisSpec spec);

}  // namespace phfem

#endif
