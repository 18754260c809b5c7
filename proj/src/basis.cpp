#include "phfem/basis.hpp"

#include <cmath>
#include <stdexcept>

namespace phfem {

int reference_dim(ElemType elem) { return elem == ElemType::Interval ? 1 : 2; }

int local_node_count(ElemType elem, int degree) {
  if (degree < 0 || degree > 2) throw std::invalid_argument("basis degree must be 0, 1 or 2");
  if (elem == ElemType::Interval) return degree == 0 ? 1 : degree + 1;
  switch (degree) {
    case 0: return 1;
    case 1: return 3;
    default: return 6;
  }
}

Eigen::MatrixXd lagrange_nodes(ElemType elem, int degree) {
  const int n = local_node_count(elem, degree);
  Eigen::MatrixXd pts(n, reference_dim(elem));
  if (elem == ElemType::Interval) {
    switch (degree) {
      case 0: pts << 0.5; break;
      case 1: pts << 0.0, 1.0; break;
      default: pts << 0.0, 1.0, 0.5; break;
    }
  } else {
    switch (degree) {
      case 0: pts << 1.0 / 3.0, 1.0 / 3.0; break;
      case 1:
        pts << 0.0, 0.0, 1.0, 0.0, 0.0, 1.0;
        break;
      default:
        pts << 0.0, 0.0, 1.0, 0.0, 0.0, 1.0,   // vertices
            0.5, 0.0, 0.5, 0.5, 0.0, 0.5;      // edge midpoints (0,1),(1,2),(2,0)
        break;
    }
  }
  return pts;
}

namespace {

void interval_shapes(int degree, double x, Eigen::VectorXd& N, Eigen::MatrixXd& dN) {
  switch (degree) {
    case 0:
      N(0) = 1.0;
      dN(0, 0) = 0.0;
      break;
    case 1:
      N(0) = 1.0 - x;
      N(1) = x;
      dN(0, 0) = -1.0;
      dN(1, 0) = 1.0;
      break;
    default:
      N(0) = (1.0 - x) * (1.0 - 2.0 * x);
      N(1) = x * (2.0 * x - 1.0);
      N(2) = 4.0 * x * (1.0 - x);
      dN(0, 0) = 4.0 * x - 3.0;
      dN(1, 0) = 4.0 * x - 1.0;
      dN(2, 0) = 4.0 - 8.0 * x;
      break;
  }
}

void triangle_shapes(int degree, double x, double y, Eigen::VectorXd& N, Eigen::MatrixXd& dN) {
  const double l0 = 1.0 - x - y, l1 = x, l2 = y;
  switch (degree) {
    case 0:
      N(0) = 1.0;
      dN.setZero();
      break;
    case 1:
      N(0) = l0;
      N(1) = l1;
      N(2) = l2;
      dN << -1.0, -1.0, 1.0, 0.0, 0.0, 1.0;
      break;
    default: {
      N(0) = l0 * (2.0 * l0 - 1.0);
      N(1) = l1 * (2.0 * l1 - 1.0);
      N(2) = l2 * (2.0 * l2 - 1.0);
      N(3) = 4.0 * l0 * l1;
      N(4) = 4.0 * l1 * l2;
      N(5) = 4.0 * l2 * l0;
      // d l0 = (-1, -1), d l1 = (1, 0), d l2 = (0, 1)
      dN(0, 0) = 1.0 - 4.0 * l0;
      dN(0, 1) = 1.0 - 4.0 * l0;
      dN(1, 0) = 4.0 * l1 - 1.0;
      dN(1, 1) = 0.0;
      dN(2, 0) = 0.0;
      dN(2, 1) = 4.0 * l2 - 1.0;
      dN(3, 0) = 4.0 * (l0 - l1);
      dN(3, 1) = -4.0 * l1;
      dN(4, 0) = 4.0 * l2;
      dN(4, 1) = 4.0 * l1;
      dN(5, 0) = -4.0 * l2;
      dN(5, 1) = 4.0 * (l0 - l2);
      break;
    }
  }
}

}  // namespace

ShapeValues shape_functions(ElemType elem, int degree, const Eigen::MatrixXd& points) {
  const int nloc = local_node_count(elem, degree);
  const int npts = static_cast<int>(points.rows());
  ShapeValues out;
  out.values.resize(npts, nloc);
  out.grads.assign(npts, Eigen::MatrixXd::Zero(nloc, reference_dim(elem)));
  Eigen::VectorXd N(nloc);
  Eigen::MatrixXd dN(nloc, reference_dim(elem));
  for (int p = 0; p < npts; ++p) {
    if (elem == ElemType::Interval)
      interval_shapes(degree, points(p, 0), N, dN);
    else
      triangle_shapes(degree, points(p, 0), points(p, 1), N, dN);
    out.values.row(p) = N.transpose();
    out.grads[p] = dN;
  }
  return out;
}

namespace {

QuadratureRule gauss_interval(int npts) {
  QuadratureRule rule;
  rule.points.resize(npts, 1);
  rule.weights.resize(npts);
  switch (npts) {
    case 1:
      rule.points << 0.5;
      rule.weights << 1.0;
      break;
    case 2: {
      const double a = 0.5 / std::sqrt(3.0);
      rule.points << 0.5 - a, 0.5 + a;
      rule.weights << 0.5, 0.5;
      break;
    }
    case 3: {
      const double a = 0.5 * std::sqrt(0.6);
      rule.points << 0.5 - a, 0.5, 0.5 + a;
      rule.weights << 5.0 / 18.0, 4.0 / 9.0, 5.0 / 18.0;
      break;
    }
    default: {
      const double x1 = 0.3399810435848562648, x2 = 0.8611363115940525752;
      const double w1 = 0.6521451548625461426, w2 = 0.3478548451374538574;
      rule.points << 0.5 * (1.0 - x2), 0.5 * (1.0 - x1), 0.5 * (1.0 + x1), 0.5 * (1.0 + x2);
      rule.weights << 0.5 * w2, 0.5 * w1, 0.5 * w1, 0.5 * w2;
      break;
    }
  }
  return rule;
}

void push_sym3(std::vector<Eigen::Vector2d>& pts, std::vector<double>& w, double a, double wt) {
  // barycentric (1-2a, a, a) orbit on the reference triangle
  const double b = 1.0 - 2.0 * a;
  pts.emplace_back(a, a);
  pts.emplace_back(b, a);
  pts.emplace_back(a, b);
  w.insert(w.end(), 3, wt);
}

void push_sym6(std::vector<Eigen::Vector2d>& pts, std::vector<double>& w, double a, double b,
               double wt) {
  const double c = 1.0 - a - b;
  pts.emplace_back(a, b);
  pts.emplace_back(b, a);
  pts.emplace_back(a, c);
  pts.emplace_back(c, a);
  pts.emplace_back(b, c);
  pts.emplace_back(c, b);
  w.insert(w.end(), 6, wt);
}

QuadratureRule triangle_rule(int degree) {
  std::vector<Eigen::Vector2d> pts;
  std::vector<double> w;
  switch (degree) {
    case 0:
    case 1:
      pts.emplace_back(1.0 / 3.0, 1.0 / 3.0);
      w.push_back(1.0);
      break;
    case 2:
      push_sym3(pts, w, 1.0 / 6.0, 1.0 / 3.0);
      break;
    case 3:
    case 4:
      // 6-point degree-4 rule (all weights positive)
      push_sym3(pts, w, 0.445948490915965, 0.223381589678011);
      push_sym3(pts, w, 0.091576213509771, 0.109951743655322);
      break;
    case 5:
      pts.emplace_back(1.0 / 3.0, 1.0 / 3.0);
      w.push_back(0.225);
      push_sym3(pts, w, 0.470142064105115, 0.132394152788506);
      push_sym3(pts, w, 0.101286507323456, 0.125939180544827);
      break;
    default:
      // 12-point degree-6 rule
      push_sym3(pts, w, 0.249286745170910, 0.116786275726379);
      push_sym3(pts, w, 0.063089014491502, 0.050844906370207);
      push_sym6(pts, w, 0.310352451033785, 0.053145049844816, 0.082851075618374);
      break;
  }
  QuadratureRule rule;
  rule.points.resize(static_cast<int>(pts.size()), 2);
  rule.weights.resize(static_cast<int>(pts.size()));
  for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
    rule.points.row(i) = pts[i].transpose();
    rule.weights(i) = 0.5 * w[i];  // published weights are normalized to unit sum
  }
  return rule;
}

}  // namespace

QuadratureRule quadrature(ElemType elem, int exactness_degree) {
  if (exactness_degree < 0 || exactness_degree > 6)
    throw std::invalid_argument("quadrature: exactness degree must be in [0, 6]");
  if (elem == ElemType::Interval) {
    const int npts = std::max(1, (exactness_degree + 2) / 2);  // n points: degree 2n-1
    return gauss_interval(npts);
  }
  return triangle_rule(exactness_degree);
}

}  // namespace phfem
