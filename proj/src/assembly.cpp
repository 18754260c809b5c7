#include "phfem/assembly.hpp"

#include <stdexcept>

namespace phfem {

using voigt::Dim;

namespace {

// Per-cell affine geometry, cached once.
struct CellGeom {
  Eigen::MatrixXd Jinv;
  double detJ;
};

std::vector<CellGeom> cell_geometry(const Mesh& mesh) {
  std::vector<CellGeom> geo(mesh.cell_count());
  for (int c = 0; c < mesh.cell_count(); ++c) {
    const Eigen::MatrixXd V = mesh.cell_vertices(c);
    Eigen::MatrixXd J(mesh.dim(), mesh.dim());
    for (int k = 0; k < mesh.dim(); ++k) J.col(k) = V.col(k + 1) - V.col(0);
    geo[c].detJ = mesh.dim() == 1 ? J(0, 0) : J.determinant();
    if (geo[c].detJ <= 0.0) throw std::runtime_error("assembly: inverted cell");
    geo[c].Jinv = J.inverse();
  }
  return geo;
}

}  // namespace

Assembler::Assembler(Spaces spaces, Material material,
                     std::shared_ptr<const BoundaryBasis> traction_basis,
                     std::shared_ptr<const BoundaryBasis> velocity_basis)
    : spaces_(std::move(spaces)), material_(std::move(material)),
      xi_(std::move(traction_basis)), zeta_(std::move(velocity_basis)) {
  mesh_ = spaces_.velocity->mesh_ptr();
  const Dim dim(mesh_->dim());
  if (spaces_.velocity->components() != dim.d() || spaces_.stress->components() != dim.sym() ||
      spaces_.defgrad->components() != dim.grad())
    throw std::invalid_argument("assembler: field component counts do not match the dimension");
  if (spaces_.stress->mesh_ptr().get() != mesh_.get() ||
      spaces_.defgrad->mesh_ptr().get() != mesh_.get())
    throw std::invalid_argument("assembler: spaces live on different meshes");
  if (material_.elasticity.C.rows() != dim.sym())
    throw std::invalid_argument("assembler: elasticity matrix has wrong Voigt size");
}

int Assembler::n_tau() const {
  for (const auto& f : mesh_->facets())
    if (f.tag == BoundaryTag::NeumannLoaded) return xi_->n(mesh_->dim());
  return 0;
}

int Assembler::n_nu() const {
  for (const auto& f : mesh_->facets())
    if (f.tag == BoundaryTag::Dirichlet) return zeta_->n(mesh_->dim());
  return 0;
}

namespace {

int volume_exactness(const Spaces& sp) {
  const int pv = sp.velocity->spec().degree;
  const int pS = sp.stress->spec().degree;
  const int pF = sp.defgrad->spec().degree;
  int deg = std::max({2 * pv, 2 * pS, 2 * pF, pv - 1 + pF + pS, pv - 1 + pF});
  return std::max(deg, 0);
}

int surface_exactness(const Spaces& sp) {
  return sp.velocity->spec().degree + sp.stress->spec().degree + sp.defgrad->spec().degree;
}

}  // namespace

void Assembler::volume_kernel(const Eigen::VectorXd* F_hat, const Eigen::VectorXd* S_hat,
                              const Eigen::VectorXd* v_hat,
                              std::vector<Eigen::Triplet<double>>* K_out,
                              std::vector<Eigen::Triplet<double>>* dKS_out,
                              std::vector<Eigen::Triplet<double>>* dKtV_out) const {
  const Dim dim(mesh_->dim());
  const int d = dim.d(), m = dim.sym(), q = dim.grad();
  const Eigen::MatrixXi& gv = voigt::grad_index_table(dim);
  const auto& units = voigt::f_matrix_units(dim);

  const ElemType elem = spaces_.velocity->elem_type();
  const QuadratureRule rule = quadrature(elem, volume_exactness(spaces_));
  const ShapeValues shv = shape_functions(elem, spaces_.velocity->spec().degree, rule.points);
  const ShapeValues shS = shape_functions(elem, spaces_.stress->spec().degree, rule.points);
  const ShapeValues shF = shape_functions(elem, spaces_.defgrad->spec().degree, rule.points);
  const auto geom = cell_geometry(*mesh_);

  const int nv = static_cast<int>(shv.values.cols());
  const int nS = static_cast<int>(shS.values.cols());
  const int nF = static_cast<int>(shF.values.cols());

  Eigen::VectorXd fq(q), s_val(m), g_val(q);
  Eigen::MatrixXd Fm(q, m);
  Eigen::MatrixXd dNv(nv, d);

  for (int c = 0; c < mesh_->cell_count(); ++c) {
    const auto& dv = spaces_.velocity->cell_scalar_dofs(c);
    const auto& dS = spaces_.stress->cell_scalar_dofs(c);
    const auto& dF = spaces_.defgrad->cell_scalar_dofs(c);
    const double detJ = geom[c].detJ;

    for (int p = 0; p < rule.points.rows(); ++p) {
      const double w = rule.weights(p) * detJ;
      dNv.noalias() = shv.grads[p] * geom[c].Jinv;

      // interpolated deformation gradient in vector form
      if (F_hat) {
        fq.setZero();
        for (int a = 0; a < nF; ++a)
          for (int k = 0; k < q; ++k) fq(k) += shF.values(p, a) * (*F_hat)(dF[a] * q + k);
        Fm.setZero();
        for (int k = 0; k < q; ++k)
          if (fq(k) != 0.0) Fm += fq(k) * units[k];
      }

      if (K_out) {
        // (D phi)^T theta_F psi
        for (int b = 0; b < nv; ++b)
          for (int i = 0; i < d; ++i) {
            const int row = dv[b] * d + i;
            for (int a = 0; a < nS; ++a) {
              const double Na = shS.values(p, a);
              for (int s = 0; s < m; ++s) {
                double acc = 0.0;
                for (int j = 0; j < d; ++j) acc += dNv(b, j) * Fm(gv(i, j), s);
                if (acc != 0.0) K_out->emplace_back(row, dS[a] * m + s, w * acc * Na);
              }
            }
          }
      }

      if (dKS_out) {
        s_val.setZero();
        for (int a = 0; a < nS; ++a)
          for (int s = 0; s < m; ++s) s_val(s) += shS.values(p, a) * (*S_hat)(dS[a] * m + s);
        for (int aF = 0; aF < nF; ++aF) {
          const double NaF = shF.values(p, aF);
          for (int k = 0; k < q; ++k) {
            const Eigen::VectorXd u = units[k] * s_val;  // q-vector
            const int col = dF[aF] * q + k;
            for (int b = 0; b < nv; ++b)
              for (int i = 0; i < d; ++i) {
                double acc = 0.0;
                for (int j = 0; j < d; ++j) acc += dNv(b, j) * u(gv(i, j));
                if (acc != 0.0) dKS_out->emplace_back(dv[b] * d + i, col, w * NaF * acc);
              }
          }
        }
      }

      if (dKtV_out) {
        g_val.setZero();
        for (int b = 0; b < nv; ++b)
          for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
              g_val(gv(i, j)) += dNv(b, j) * (*v_hat)(dv[b] * d + i);
        for (int aF = 0; aF < nF; ++aF) {
          const double NaF = shF.values(p, aF);
          for (int k = 0; k < q; ++k) {
            const Eigen::VectorXd t = units[k].transpose() * g_val;  // m-vector
            const int col = dF[aF] * q + k;
            for (int a = 0; a < nS; ++a) {
              const double Na = shS.values(p, a);
              for (int s = 0; s < m; ++s)
                if (t(s) != 0.0) dKtV_out->emplace_back(dS[a] * m + s, col, w * NaF * Na * t(s));
            }
          }
        }
      }
    }
  }
}

void Assembler::surface_kernel(const Eigen::VectorXd* F_hat, const Eigen::VectorXd* S_hat,
                               const Eigen::VectorXd* v_hat, const Eigen::VectorXd* nu,
                               std::vector<Eigen::Triplet<double>>* K_out,
                               std::vector<Eigen::Triplet<double>>* Gnu_out,
                               std::vector<Eigen::Triplet<double>>* dKS_out,
                               std::vector<Eigen::Triplet<double>>* dKtV_out,
                               std::vector<Eigen::Triplet<double>>* dGnu_out) const {
  const Dim dim(mesh_->dim());
  const int d = dim.d(), m = dim.sym(), q = dim.grad();
  const auto& units = voigt::f_matrix_units(dim);
  const int exact = surface_exactness(spaces_);

  Eigen::VectorXd fq(q), s_val(m), trace_v(d), nu_val(d);
  Eigen::MatrixXd Fm(q, m), NF(d, m);

  for (int f = 0; f < static_cast<int>(mesh_->facets().size()); ++f) {
    if (mesh_->facets()[f].tag != BoundaryTag::Dirichlet) continue;
    const FacetShape fv = spaces_.velocity->facet_shape(f, exact);
    const FacetShape fS = spaces_.stress->facet_shape(f, exact);
    const FacetShape fF = spaces_.defgrad->facet_shape(f, exact);
    const int cell = fv.cell;
    const auto& dv = spaces_.velocity->cell_scalar_dofs(cell);
    const auto& dS = spaces_.stress->cell_scalar_dofs(cell);
    const auto& dF = spaces_.defgrad->cell_scalar_dofs(cell);
    const Eigen::MatrixXd Nmat = voigt::normal_matrix(fv.normal);
    const int nv = static_cast<int>(fv.values.cols());
    const int nS = static_cast<int>(fS.values.cols());
    const int nF = static_cast<int>(fF.values.cols());

    for (int p = 0; p < fv.weights.size(); ++p) {
      const double w = fv.weights(p);
      const Eigen::VectorXd X = fv.points.row(p).transpose();
      Eigen::MatrixXd zeta;
      if (Gnu_out || dGnu_out) zeta = zeta_->eval(X, d);

      fq.setZero();
      for (int a = 0; a < nF; ++a)
        for (int k = 0; k < q; ++k) fq(k) += fF.values(p, a) * (*F_hat)(dF[a] * q + k);
      Fm.setZero();
      for (int k = 0; k < q; ++k)
        if (fq(k) != 0.0) Fm += fq(k) * units[k];
      NF.noalias() = Nmat * Fm;  // d x m

      // K boundary term - phi^T N theta_F psi and Gnu = + psi^T theta_F^T N^T zeta
      // share one kernel product, so the Dirichlet port duality is exact.
      if (K_out || Gnu_out) {
        for (int a = 0; a < nS; ++a)
          for (int s = 0; s < m; ++s)
            for (int i = 0; i < d; ++i) {
              const double kern = w * fS.values(p, a) * NF(i, s);
              if (kern == 0.0) continue;
              if (K_out)
                for (int b = 0; b < nv; ++b) {
                  const double val = kern * fv.values(p, b);
                  if (val != 0.0) K_out->emplace_back(dv[b] * d + i, dS[a] * m + s, -val);
                }
              if (Gnu_out)
                for (int col = 0; col < zeta.cols(); ++col) {
                  const double val = kern * zeta(i, col);
                  if (val != 0.0) Gnu_out->emplace_back(dS[a] * m + s, col, val);
                }
            }
      }

      if (dKS_out) {
        s_val.setZero();
        for (int a = 0; a < nS; ++a)
          for (int s = 0; s < m; ++s) s_val(s) += fS.values(p, a) * (*S_hat)(dS[a] * m + s);
        for (int aF = 0; aF < nF; ++aF)
          for (int k = 0; k < q; ++k) {
            const Eigen::VectorXd Nu = Nmat * (units[k] * s_val);  // d-vector
            const int col = dF[aF] * q + k;
            for (int b = 0; b < nv; ++b)
              for (int i = 0; i < d; ++i) {
                const double val = fF.values(p, aF) * fv.values(p, b) * Nu(i);
                if (val != 0.0) dKS_out->emplace_back(dv[b] * d + i, col, -w * val);
              }
          }
      }

      if (dKtV_out) {
        trace_v.setZero();
        for (int b = 0; b < nv; ++b)
          for (int i = 0; i < d; ++i) trace_v(i) += fv.values(p, b) * (*v_hat)(dv[b] * d + i);
        const Eigen::VectorXd Ntv = Nmat.transpose() * trace_v;  // q-vector
        for (int aF = 0; aF < nF; ++aF)
          for (int k = 0; k < q; ++k) {
            const Eigen::VectorXd t = units[k].transpose() * Ntv;  // m-vector
            const int col = dF[aF] * q + k;
            for (int a = 0; a < nS; ++a)
              for (int s = 0; s < m; ++s) {
                const double val = fF.values(p, aF) * fS.values(p, a) * t(s);
                if (val != 0.0) dKtV_out->emplace_back(dS[a] * m + s, col, -w * val);
              }
          }
      }

      if (dGnu_out) {
        nu_val.noalias() = zeta * (*nu);
        const Eigen::VectorXd Ntn = Nmat.transpose() * nu_val;
        for (int aF = 0; aF < nF; ++aF)
          for (int k = 0; k < q; ++k) {
            const Eigen::VectorXd t = units[k].transpose() * Ntn;
            const int col = dF[aF] * q + k;
            for (int a = 0; a < nS; ++a)
              for (int s = 0; s < m; ++s) {
                const double val = fF.values(p, aF) * fS.values(p, a) * t(s);
                if (val != 0.0) dGnu_out->emplace_back(dS[a] * m + s, col, w * val);
              }
          }
      }
    }
  }
}

ConstantOperators Assembler::assemble_constant() const {
  const Dim dim(mesh_->dim());
  const int d = dim.d(), m = dim.sym(), q = dim.grad();
  const Eigen::MatrixXi& gv = voigt::grad_index_table(dim);
  const ElemType elem = spaces_.velocity->elem_type();
  const QuadratureRule rule = quadrature(elem, volume_exactness(spaces_));
  const ShapeValues shv = shape_functions(elem, spaces_.velocity->spec().degree, rule.points);
  const ShapeValues shS = shape_functions(elem, spaces_.stress->spec().degree, rule.points);
  const ShapeValues shF = shape_functions(elem, spaces_.defgrad->spec().degree, rule.points);
  const auto geom = cell_geometry(*mesh_);
  const Eigen::MatrixXd& Cinv = material_.elasticity.Cinv;

  const int nv = static_cast<int>(shv.values.cols());
  const int nS = static_cast<int>(shS.values.cols());
  const int nF = static_cast<int>(shF.values.cols());

  std::vector<Eigen::Triplet<double>> tMv, tMS, tMF, tZ;
  Eigen::MatrixXd dNv(nv, d);

  for (int c = 0; c < mesh_->cell_count(); ++c) {
    const auto& dv = spaces_.velocity->cell_scalar_dofs(c);
    const auto& dS = spaces_.stress->cell_scalar_dofs(c);
    const auto& dF = spaces_.defgrad->cell_scalar_dofs(c);
    for (int p = 0; p < rule.points.rows(); ++p) {
      const double w = rule.weights(p) * geom[c].detJ;
      dNv.noalias() = shv.grads[p] * geom[c].Jinv;

      for (int a = 0; a < nv; ++a)
        for (int b = 0; b < nv; ++b) {
          const double mass = w * material_.rho0 * shv.values(p, a) * shv.values(p, b);
          for (int i = 0; i < d; ++i) tMv.emplace_back(dv[a] * d + i, dv[b] * d + i, mass);
        }

      for (int a = 0; a < nS; ++a)
        for (int b = 0; b < nS; ++b) {
          const double nn = w * shS.values(p, a) * shS.values(p, b);
          for (int s = 0; s < m; ++s)
            for (int r = 0; r < m; ++r)
              if (Cinv(s, r) != 0.0)
                tMS.emplace_back(dS[a] * m + s, dS[b] * m + r, nn * Cinv(s, r));
        }

      for (int a = 0; a < nF; ++a)
        for (int b = 0; b < nF; ++b) {
          const double nn = w * shF.values(p, a) * shF.values(p, b);
          for (int k = 0; k < q; ++k) tMF.emplace_back(dF[a] * q + k, dF[b] * q + k, nn);
        }

      // Z = int theta^T (D phi)
      for (int a = 0; a < nF; ++a)
        for (int b = 0; b < nv; ++b)
          for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
              const double val = w * shF.values(p, a) * dNv(b, j);
              if (val != 0.0)
                tZ.emplace_back(dF[a] * q + gv(i, j), dv[b] * d + i, val);
            }
    }
  }

  // Gtau over the loaded Neumann boundary.
  std::vector<Eigen::Triplet<double>> tG;
  const int ntau = n_tau();
  for (int f = 0; f < static_cast<int>(mesh_->facets().size()); ++f) {
    if (mesh_->facets()[f].tag != BoundaryTag::NeumannLoaded) continue;
    const FacetShape fv = spaces_.velocity->facet_shape(f, surface_exactness(spaces_));
    const int cell = fv.cell;
    const auto& dv = spaces_.velocity->cell_scalar_dofs(cell);
    for (int p = 0; p < fv.weights.size(); ++p) {
      const Eigen::MatrixXd xi = xi_->eval(fv.points.row(p).transpose(), d);
      for (int b = 0; b < fv.values.cols(); ++b)
        for (int i = 0; i < d; ++i)
          for (int col = 0; col < ntau; ++col) {
            const double val = fv.weights(p) * fv.values(p, b) * xi(i, col);
            if (val != 0.0) tG.emplace_back(dv[b] * d + i, col, val);
          }
    }
  }

  ConstantOperators ops;
  const int Nv = spaces_.velocity->dofs();
  const int NS = spaces_.stress->dofs();
  const int NF = spaces_.defgrad->dofs();
  ops.Mv.resize(Nv, Nv);
  ops.Mv.setFromTriplets(tMv.begin(), tMv.end());
  ops.MS.resize(NS, NS);
  ops.MS.setFromTriplets(tMS.begin(), tMS.end());
  ops.MF.resize(NF, NF);
  ops.MF.setFromTriplets(tMF.begin(), tMF.end());
  ops.Z.resize(NF, Nv);
  ops.Z.setFromTriplets(tZ.begin(), tZ.end());
  ops.Gtau.resize(Nv, std::max(ntau, 0));
  ops.Gtau.setFromTriplets(tG.begin(), tG.end());
  return ops;
}

SparseMat Assembler::assemble_K(const Eigen::VectorXd& F_hat) const {
  if (F_hat.size() != spaces_.defgrad->dofs())
    throw std::invalid_argument("assemble_K: F coefficient size mismatch");
  std::vector<Eigen::Triplet<double>> t;
  volume_kernel(&F_hat, nullptr, nullptr, &t, nullptr, nullptr);
  surface_kernel(&F_hat, nullptr, nullptr, nullptr, &t, nullptr, nullptr, nullptr, nullptr);
  SparseMat K(spaces_.velocity->dofs(), spaces_.stress->dofs());
  K.setFromTriplets(t.begin(), t.end());
  return K;
}

SparseMat Assembler::assemble_K_boundary(const Eigen::VectorXd& F_hat) const {
  if (F_hat.size() != spaces_.defgrad->dofs())
    throw std::invalid_argument("assemble_K_boundary: F coefficient size mismatch");
  std::vector<Eigen::Triplet<double>> t;
  surface_kernel(&F_hat, nullptr, nullptr, nullptr, &t, nullptr, nullptr, nullptr, nullptr);
  SparseMat K(spaces_.velocity->dofs(), spaces_.stress->dofs());
  K.setFromTriplets(t.begin(), t.end());
  return K;
}

SparseMat Assembler::assemble_Gnu(const Eigen::VectorXd& F_hat) const {
  if (n_nu() == 0) throw std::runtime_error("assemble_Gnu: mesh has no Dirichlet boundary");
  if (F_hat.size() != spaces_.defgrad->dofs())
    throw std::invalid_argument("assemble_Gnu: F coefficient size mismatch");
  std::vector<Eigen::Triplet<double>> t;
  surface_kernel(&F_hat, nullptr, nullptr, nullptr, nullptr, &t, nullptr, nullptr, nullptr);
  SparseMat G(spaces_.stress->dofs(), n_nu());
  G.setFromTriplets(t.begin(), t.end());
  return G;
}

JacobianBlocks Assembler::assemble_jacobian_blocks(const Eigen::VectorXd& S_hat,
                                                   const Eigen::VectorXd& v_hat,
                                                   const Eigen::VectorXd& nu) const {
  if (S_hat.size() != spaces_.stress->dofs() || v_hat.size() != spaces_.velocity->dofs())
    throw std::invalid_argument("jacobian blocks: coefficient size mismatch");
  const int nnu = n_nu();
  if (nu.size() != nnu) throw std::invalid_argument("jacobian blocks: nu size mismatch");

  std::vector<Eigen::Triplet<double>> tKS, tKtV, tGnu;
  // The volume kernel needs no F value for the derivative blocks; pass a
  // zero vector so the interpolation loop stays uniform.
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(spaces_.defgrad->dofs());
  volume_kernel(&zero, &S_hat, &v_hat, nullptr, &tKS, &tKtV);
  if (nnu > 0)
    surface_kernel(&zero, &S_hat, &v_hat, &nu, nullptr, nullptr, &tKS, &tKtV, &tGnu);

  JacobianBlocks blocks;
  const int Nv = spaces_.velocity->dofs();
  const int NS = spaces_.stress->dofs();
  const int NFd = spaces_.defgrad->dofs();
  blocks.dKS_dF.resize(Nv, NFd);
  blocks.dKS_dF.setFromTriplets(tKS.begin(), tKS.end());
  blocks.dKtV_dF.resize(NS, NFd);
  blocks.dKtV_dF.setFromTriplets(tKtV.begin(), tKtV.end());
  blocks.dGnuNu_dF.resize(NS, NFd);
  blocks.dGnuNu_dF.setFromTriplets(tGnu.begin(), tGnu.end());
  return blocks;
}

}  // namespace phfem
