#ifndef PHFEM_VOIGT_HPP
#define PHFEM_VOIGT_HPP

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <utility>
#include <vector>

// Dimension-generic tensor algebra in vector (Voigt) notation.
//
// Second-order tensors are stored three ways:
//   * full d x d matrices,
//   * symmetric tensors as m-vectors (m = d(d+1)/2), where stress keeps
//     each distinct component once and strain doubles the off-diagonal
//     (engineering shear), so that  S : E  =  stress_voigt(S) . strain_voigt(E),
//   * general gradients as q-vectors (q = d^2) in the component ordering
//     fixed by the rows of the gradient operator D: diagonal pairs (i,i)
//     first, then (1,2),(2,3),(3,1),(1,3),(2,1),(3,2) for d = 3 and the
//     restriction of that list for d = 1, 2.

namespace phfem::voigt {

class Dim {
public:
  explicit Dim(int d);
  int d() const { return d_; }
  int sym() const { return d_ * (d_ + 1) / 2; }   // m
  int grad() const { return d_ * d_; }            // q

private:
  int d_;
};

// (i, j) component pairs (0-based) in the gradient-vector ordering.
const std::vector<std::pair<int, int>>& index_order(Dim dim);

// Position of component (i, j) in a q-vector.
int grad_index(Dim dim, int i, int j);

// d x d lookup table of grad_index values.
const Eigen::MatrixXi& grad_index_table(Dim dim);

// Position of the unordered pair {i, j} in an m-vector.
int sym_index(Dim dim, int i, int j);

Eigen::VectorXd stress_voigt(const Eigen::MatrixXd& S);
Eigen::MatrixXd stress_unvoigt(Dim dim, const Eigen::VectorXd& s);
Eigen::VectorXd strain_voigt(const Eigen::MatrixXd& E);   // doubled shear
Eigen::MatrixXd strain_unvoigt(Dim dim, const Eigen::VectorXd& e);
Eigen::VectorXd grad_vec(const Eigen::MatrixXd& G);
Eigen::MatrixXd grad_unvec(Dim dim, const Eigen::VectorXd& g);

// grad_vec of the identity tensor, e.g. (1,1,0,0) for d = 2.
Eigen::VectorXd identity_grad_vec(Dim dim);

// E = (F^T F - I)/2, exactly symmetric by construction. Emits a
// diagnostic through set_warning_handler if det F <= 0 (element
// inversion); the strain itself stays well defined.
Eigen::MatrixXd green_strain(const Eigen::MatrixXd& F);

// strain_voigt( (F^T G + G^T F)/2 ), the rate pairing the Green strain
// with a velocity gradient G. Coincides with f_matrix(F)^T * grad_vec(G).
Eigen::VectorXd strain_rate(const Eigen::MatrixXd& F, const Eigen::MatrixXd& G);

// The q x m matrix form of a deformation gradient, defined by
//   f_matrix(F) * stress_voigt(S)  =  grad_vec(F S)      (S symmetric)
//   f_matrix(F)^T * grad_vec(G)    =  strain_voigt(sym(F^T G)).
Eigen::MatrixXd f_matrix(const Eigen::MatrixXd& F);

// f_matrix of the q unit tensors E_k (k-th grad_vec basis element);
// f_matrix is linear, so f_matrix(F) = sum_k grad_vec(F)[k] * unit[k].
const std::vector<Eigen::MatrixXd>& f_matrix_units(Dim dim);

// The d x q matrix with normal_matrix(N) * grad_vec(G) = G N for a unit
// outward normal N. Rejects non-unit normals (|N| - 1 beyond 1e-12).
Eigen::MatrixXd normal_matrix(const Eigen::VectorXd& N);

// St. Venant-Kirchhoff elasticity in Voigt form, C = 2 mu I_s + lambda I(x)I,
// with the engineering-shear strain convention (shear block diag(mu)).
struct Elasticity {
  Eigen::MatrixXd C;      // m x m, N/m^2 (d = 1: 1 x 1 holding EA in N)
  Eigen::MatrixXd Cinv;

  static Elasticity isotropic(double lambda, double mu, Dim dim);
  static Elasticity rod(double EA);   // d = 1, stiffness EA supplied directly
};

// Diagnostics hook for non-fatal warnings (default writes to stderr).
void set_warning_handler(std::function<void(const std::string&)> handler);
void warn(const std::string& message);

}  // namespace phfem::voigt

#endif
