#ifndef PHFEM_ASSEMBLY_HPP
#define PHFEM_ASSEMBLY_HPP

#include "phfem/space.hpp"
#include "phfem/voigt.hpp"

#include <Eigen/Sparse>
#include <memory>

namespace phfem {

using SparseMat = Eigen::SparseMatrix<double>;

struct Material {
  double rho0 = 0.0;           // kg/m (1D) or kg/m^3 (2D, unit thickness)
  voigt::Elasticity elasticity;
};

// Spatial basis of a boundary input (xi for tractions, zeta for imposed
// velocities): a d x n matrix at each boundary point. The default uniform
// basis is the identity, so inputs are plain d-vectors.
class BoundaryBasis {
public:
  virtual ~BoundaryBasis() = default;
  virtual int n(int dim) const = 0;
  virtual Eigen::MatrixXd eval(const Eigen::VectorXd& X, int dim) const = 0;
};

class UniformBoundaryBasis : public BoundaryBasis {
public:
  int n(int dim) const override { return dim; }
  Eigen::MatrixXd eval(const Eigen::VectorXd&, int dim) const override {
    return Eigen::MatrixXd::Identity(dim, dim);
  }
};

// The three mixed fields of the model on one mesh.
struct Spaces {
  std::shared_ptr<const FunctionSpace> velocity;   // CG, d components
  std::shared_ptr<const FunctionSpace> stress;     // DG, m components
  std::shared_ptr<const FunctionSpace> defgrad;    // DG, q components
};

// State-independent operators:
//   Mv = int phi^T rho0 phi, MS = int psi^T C^{-1} psi, MF = int theta^T theta,
//   Z = int theta^T (D phi), Gtau = int_{SigmaN,loaded} phi^T xi.
struct ConstantOperators {
  SparseMat Mv, MS, MF, Z, Gtau;
};

// Derivatives of the state-dependent products with respect to F-hat; the
// operators are linear in F-hat, so these are exact and argument-free.
struct JacobianBlocks {
  SparseMat dKS_dF;     // d[K(F) S] / dF      (n_v x n_F)
  SparseMat dKtV_dF;    // d[K(F)^T v] / dF    (n_S x n_F)
  SparseMat dGnuNu_dF;  // d[Gnu(F) nu] / dF   (n_S x n_F)
};

class Assembler {
public:
  Assembler(Spaces spaces, Material material,
            std::shared_ptr<const BoundaryBasis> traction_basis =
                std::make_shared<UniformBoundaryBasis>(),
            std::shared_ptr<const BoundaryBasis> velocity_basis =
                std::make_shared<UniformBoundaryBasis>());

  const Spaces& spaces() const { return spaces_; }
  const Material& material() const { return material_; }
  int dim() const { return mesh_->dim(); }
  int n_tau() const;   // traction input size (0 without a loaded boundary)
  int n_nu() const;    // velocity input size (0 without a Dirichlet boundary)

  ConstantOperators assemble_constant() const;

  // K(F) = int (D phi)^T theta_F psi dOmega - int_{SigmaD} phi^T N theta_F psi dSigma,
  // with theta_F the interpolated deformation gradient in matrix form.
  SparseMat assemble_K(const Eigen::VectorXd& F_hat) const;

  // Gnu(F) = int_{SigmaD} psi^T theta_F^T N^T zeta dSigma. Shares the
  // Dirichlet kernel of assemble_K, so the input/output duality is exact.
  SparseMat assemble_Gnu(const Eigen::VectorXd& F_hat) const;

  // The Sigma_D contribution to K alone (diagnostics and duality tests).
  SparseMat assemble_K_boundary(const Eigen::VectorXd& F_hat) const;

  JacobianBlocks assemble_jacobian_blocks(const Eigen::VectorXd& S_hat,
                                          const Eigen::VectorXd& v_hat,
                                          const Eigen::VectorXd& nu) const;

private:
  void volume_kernel(const Eigen::VectorXd* F_hat, const Eigen::VectorXd* S_hat,
                     const Eigen::VectorXd* v_hat, std::vector<Eigen::Triplet<double>>* K_out,
                     std::vector<Eigen::Triplet<double>>* dKS_out,
                     std::vector<Eigen::Triplet<double>>* dKtV_out) const;
  void surface_kernel(const Eigen::VectorXd* F_hat, const Eigen::VectorXd* S_hat,
                      const Eigen::VectorXd* v_hat, const Eigen::VectorXd* nu,
                      std::vector<Eigen::Triplet<double>>* K_out,
                      std::vector<Eigen::Triplet<double>>* Gnu_out,
                      std::vector<Eigen::Triplet<double>>* dKS_out,
                      std::vector<Eigen::Triplet<double>>* dKtV_out,
                      std::vector<Eigen::Triplet<double>>* dGnu_out) const;

  std::shared_ptr<const Mesh> mesh_;
  Spaces spaces_;
  Material material_;
  std::shared_ptr<const BoundaryBasis> xi_, zeta_;
};

}  // namespace phfem

#endif
