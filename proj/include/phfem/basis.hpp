#ifndef PHFEM_BASIS_HPP
#define PHFEM_BASIS_HPP

#include <Eigen/Dense>
#include <vector>

namespace phfem {

enum class ElemType { Interval, Triangle };
enum class Family { CG, DG };

// Scalar basis on one field; `components` is the value length per point
// (d for velocity, m for stress, q for deformation gradient).
struct BasisSpec {
  Family family = Family::CG;
  int degree = 1;
  int components = 1;
};

int reference_dim(ElemType elem);
int local_node_count(ElemType elem, int degree);

// Lagrange node coordinates on the reference element, one row per node.
// Interval nodes: degree 1 -> (0, 1); degree 2 -> (0, 1, 1/2).
// Triangle nodes: vertices, then edge midpoints on (0,1), (1,2), (2,0).
Eigen::MatrixXd lagrange_nodes(ElemType elem, int degree);

struct ShapeValues {
  Eigen::MatrixXd values;               // npts x nloc
  std::vector<Eigen::MatrixXd> grads;   // per point: nloc x refdim
};

// Values and reference gradients of the degree-p Lagrange basis at the
// given reference points (one point per row).
ShapeValues shape_functions(ElemType elem, int degree, const Eigen::MatrixXd& points);

struct QuadratureRule {
  Eigen::MatrixXd points;   // npts x refdim
  Eigen::VectorXd weights;  // positive, sum = reference measure
};

// A rule integrating polynomials up to `exactness_degree` (<= 6) exactly
// on the reference element; all weights positive.
QuadratureRule quadrature(ElemType elem, int exactness_degree);

}  // namespace phfem

#endif
