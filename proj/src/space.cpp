#include "phfem/space.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace phfem {

namespace {

// Affine map of a cell: X = V0 + J * ref, with J built from vertex columns.
Eigen::MatrixXd cell_jacobian(const Mesh& mesh, int cell) {
  const Eigen::MatrixXd V = mesh.cell_vertices(cell);
  Eigen::MatrixXd J(mesh.dim(), mesh.dim());
  for (int k = 0; k < mesh.dim(); ++k) J.col(k) = V.col(k + 1) - V.col(0);
  return J;
}

}  // namespace

FunctionSpace::FunctionSpace(std::shared_ptr<const Mesh> mesh, BasisSpec spec)
    : mesh_(std::move(mesh)), spec_(spec) {
  elem_ = mesh_->dim() == 1 ? ElemType::Interval : ElemType::Triangle;
  if (spec_.family == Family::CG && spec_.degree < 1)
    throw std::invalid_argument("continuous spaces require degree >= 1");
  if (spec_.components < 1) throw std::invalid_argument("components must be >= 1");
  nloc_ = local_node_count(elem_, spec_.degree);

  const int ncells = mesh_->cell_count();
  cell_dofs_.resize(ncells);
  if (spec_.family == Family::DG) {
    n_scalar_ = ncells * nloc_;
    for (int c = 0; c < ncells; ++c) {
      cell_dofs_[c].resize(nloc_);
      for (int j = 0; j < nloc_; ++j) cell_dofs_[c][j] = c * nloc_ + j;
    }
  } else {
    // CG: vertex dofs first (mesh node order), then one dof per shared
    // higher-order entity (interval midpoints per cell, triangle edges).
    const int nverts = mesh_->node_count();
    n_scalar_ = nverts;
    for (int c = 0; c < ncells; ++c) {
      const auto& cn = mesh_->cells()[c];
      cell_dofs_[c].assign(cn.begin(), cn.end());
    }
    if (spec_.degree == 2) {
      if (elem_ == ElemType::Interval) {
        for (int c = 0; c < ncells; ++c) cell_dofs_[c].push_back(nverts + c);
        n_scalar_ += ncells;
      } else {
        for (int c = 0; c < ncells; ++c)
          for (int e : mesh_->cell_edges()[c]) cell_dofs_[c].push_back(nverts + e);
        n_scalar_ += static_cast<int>(mesh_->edges().size());
      }
    }
  }

  // Boundary scalar-dof sets per tag (meaningful for CG traces).
  boundary_dofs_.assign(3, {});
  if (spec_.family == Family::CG) {
    std::array<std::set<int>, 3> sets;
    for (int f = 0; f < static_cast<int>(mesh_->facets().size()); ++f) {
      const Facet& facet = mesh_->facets()[f];
      auto& s = sets[static_cast<int>(facet.tag)];
      for (int n : facet.nodes) s.insert(n);
      if (spec_.degree == 2 && elem_ == ElemType::Triangle) {
        // the facet's edge dof
        const auto& edges = mesh_->edges();
        auto key = std::minmax(facet.nodes[0], facet.nodes[1]);
        for (int e = 0; e < static_cast<int>(edges.size()); ++e)
          if (edges[e][0] == key.first && edges[e][1] == key.second)
            s.insert(mesh_->node_count() + e);
      }
    }
    for (int t = 0; t < 3; ++t) boundary_dofs_[t].assign(sets[t].begin(), sets[t].end());
  }
}

const std::vector<int>& FunctionSpace::boundary_scalar_dofs(BoundaryTag tag) const {
  return boundary_dofs_[static_cast<int>(tag)];
}

Eigen::MatrixXd FunctionSpace::cell_dof_points(int cell) const {
  const Eigen::MatrixXd ref = lagrange_nodes(elem_, spec_.degree);
  Eigen::MatrixXd pts(ref.rows(), mesh_->dim());
  for (int j = 0; j < ref.rows(); ++j)
    pts.row(j) = ref_to_physical(cell, ref.row(j).transpose()).transpose();
  return pts;
}

Eigen::VectorXd FunctionSpace::ref_to_physical(int cell, const Eigen::VectorXd& ref) const {
  const Eigen::MatrixXd V = mesh_->cell_vertices(cell);
  Eigen::VectorXd X = V.col(0);
  for (int k = 0; k < mesh_->dim(); ++k) X += ref(k) * (V.col(k + 1) - V.col(0));
  return X;
}

CellShape FunctionSpace::cell_shape(int cell, const Eigen::MatrixXd& ref_points) const {
  const ShapeValues sv = shape_functions(elem_, spec_.degree, ref_points);
  const Eigen::MatrixXd J = cell_jacobian(*mesh_, cell);
  const double detJ = mesh_->dim() == 1 ? J(0, 0) : J.determinant();
  if (detJ <= 0.0) throw std::runtime_error("cell_shape: non-positive reference map Jacobian");
  const Eigen::MatrixXd Jinv = J.inverse();

  CellShape out;
  out.values = sv.values;
  out.jacobian = detJ;
  out.grads.reserve(sv.grads.size());
  // rows are gradients: (grad_X N)^T = (grad_ref N)^T J^{-1}
  for (const auto& dN : sv.grads) out.grads.push_back(dN * Jinv);
  return out;
}

FacetShape FunctionSpace::facet_shape(int facet, int exactness_degree) const {
  const Facet& f = mesh_->facets().at(facet);
  FacetShape out;
  out.cell = f.cell;
  out.normal = f.normal;

  Eigen::MatrixXd phys;  // npts x d on the facet
  if (mesh_->dim() == 1) {
    phys.resize(1, 1);
    phys(0, 0) = mesh_->nodes()[f.nodes[0]](0);
    out.weights = Eigen::VectorXd::Constant(1, 1.0);  // point facet
  } else {
    const QuadratureRule line = quadrature(ElemType::Interval, exactness_degree);
    const Eigen::VectorXd a = mesh_->nodes()[f.nodes[0]];
    const Eigen::VectorXd b = mesh_->nodes()[f.nodes[1]];
    const double length = (b - a).norm();
    phys.resize(line.points.rows(), 2);
    out.weights.resize(line.points.rows());
    for (int p = 0; p < line.points.rows(); ++p) {
      phys.row(p) = (a + line.points(p, 0) * (b - a)).transpose();
      out.weights(p) = line.weights(p) * length;
    }
  }

  // Pull facet points back to owning-cell reference coordinates (exact for
  // affine cells).
  const Eigen::MatrixXd J = cell_jacobian(*mesh_, f.cell);
  const Eigen::MatrixXd Jinv = J.inverse();
  const Eigen::VectorXd x0 = mesh_->cell_vertices(f.cell).col(0);
  Eigen::MatrixXd ref(phys.rows(), mesh_->dim());
  for (int p = 0; p < phys.rows(); ++p)
    ref.row(p) = (Jinv * (phys.row(p).transpose() - x0)).transpose();

  out.points = phys;
  out.values = shape_functions(elem_, spec_.degree, ref).values;
  return out;
}

Eigen::VectorXd FunctionSpace::interpolate(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f) const {
  Eigen::VectorXd coeffs(dofs());
  std::vector<char> seen(n_scalar_, 0);
  for (int c = 0; c < mesh_->cell_count(); ++c) {
    const Eigen::MatrixXd pts = cell_dof_points(c);
    const auto& sd = cell_dofs_[c];
    for (int j = 0; j < nloc_; ++j) {
      if (seen[sd[j]]) continue;
      seen[sd[j]] = 1;
      const Eigen::VectorXd v = f(pts.row(j).transpose());
      if (v.size() != spec_.components)
        throw std::invalid_argument("interpolate: function has wrong component count");
      for (int k = 0; k < spec_.components; ++k)
        coeffs(sd[j] * spec_.components + k) = v(k);
    }
  }
  return coeffs;
}

std::pair<int, Eigen::VectorXd> FunctionSpace::locate(const Eigen::VectorXd& X) const {
  const double tol = 1e-10;
  for (int c = 0; c < mesh_->cell_count(); ++c) {
    const Eigen::MatrixXd J = cell_jacobian(*mesh_, c);
    const Eigen::VectorXd ref = J.inverse() * (X - mesh_->cell_vertices(c).col(0));
    if (mesh_->dim() == 1) {
      if (ref(0) >= -tol && ref(0) <= 1.0 + tol) return {c, ref};
    } else {
      if (ref(0) >= -tol && ref(1) >= -tol && ref(0) + ref(1) <= 1.0 + tol) return {c, ref};
    }
  }
  throw std::domain_error("locate: point is outside the mesh");
}

Eigen::VectorXd FunctionSpace::evaluate_ref(const Eigen::VectorXd& coeffs, int cell,
                                            const Eigen::VectorXd& ref) const {
  if (coeffs.size() != dofs()) throw std::invalid_argument("evaluate: coefficient size mismatch");
  const ShapeValues sv = shape_functions(elem_, spec_.degree, ref.transpose());
  Eigen::VectorXd value = Eigen::VectorXd::Zero(spec_.components);
  const auto& sd = cell_dofs_[cell];
  for (int j = 0; j < nloc_; ++j)
    for (int k = 0; k < spec_.components; ++k)
      value(k) += sv.values(0, j) * coeffs(sd[j] * spec_.components + k);
  return value;
}

Eigen::VectorXd FunctionSpace::evaluate(const Eigen::VectorXd& coeffs,
                                        const Eigen::VectorXd& X) const {
  const auto [cell, ref] = locate(X);
  return evaluate_ref(coeffs, cell, ref);
}

FunctionSpace build_space(std::shared_ptr<const Mesh> mesh, BasisSpec spec) {
  return FunctionSpace(std::move(mesh), spec);
}

}  // namespace phfem
