#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "phfem/basis.hpp"

#include <cmath>

using namespace phfem;

namespace {

// Exact reference integrals: int_0^1 x^k and int_T x^a y^b with
// T = {(x,y): x,y >= 0, x + y <= 1}; the latter is a!b!/(a+b+2)!.
double interval_monomial(int k) { return 1.0 / (k + 1); }

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

double triangle_monomial(int a, int b) {
  return factorial(a) * factorial(b) / factorial(a + b + 2);
}

double integrate_interval(const QuadratureRule& rule, int k) {
  double s = 0.0;
  for (int p = 0; p < rule.points.rows(); ++p)
    s += rule.weights(p) * std::pow(rule.points(p, 0), k);
  return s;
}

double integrate_triangle(const QuadratureRule& rule, int a, int b) {
  double s = 0.0;
  for (int p = 0; p < rule.points.rows(); ++p)
    s += rule.weights(p) * std::pow(rule.points(p, 0), a) * std::pow(rule.points(p, 1), b);
  return s;
}

}  // namespace

TEST_CASE("interval shape functions") {
  Eigen::MatrixXd mid(1, 1);
  mid << 0.5;

  const ShapeValues p1 = shape_functions(ElemType::Interval, 1, mid);
  CHECK(p1.values(0, 0) == doctest::Approx(0.5));
  CHECK(p1.values(0, 1) == doctest::Approx(0.5));

  const ShapeValues p2 = shape_functions(ElemType::Interval, 2, mid);
  CHECK(p2.values(0, 0) == doctest::Approx(0.0));
  CHECK(p2.values(0, 1) == doctest::Approx(0.0));
  CHECK(p2.values(0, 2) == doctest::Approx(1.0));
}

TEST_CASE("triangle CG1 at the barycenter") {
  Eigen::MatrixXd bary(1, 2);
  bary << 1.0 / 3.0, 1.0 / 3.0;
  const ShapeValues p1 = shape_functions(ElemType::Triangle, 1, bary);
  for (int j = 0; j < 3; ++j) CHECK(p1.values(0, j) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("Kronecker property and partition of unity") {
  for (ElemType elem : {ElemType::Interval, ElemType::Triangle}) {
    for (int degree = 0; degree <= 2; ++degree) {
      const Eigen::MatrixXd nodes = lagrange_nodes(elem, degree);
      const ShapeValues sv = shape_functions(elem, degree, nodes);
      const int nloc = local_node_count(elem, degree);
      for (int p = 0; p < nloc; ++p) {
        double sum = 0.0;
        for (int j = 0; j < nloc; ++j) {
          CHECK(sv.values(p, j) == doctest::Approx(p == j ? 1.0 : 0.0).epsilon(1e-14));
          sum += sv.values(p, j);
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("partition of unity at interior points") {
  Eigen::MatrixXd pts(3, 2);
  pts << 0.2, 0.3, 0.05, 0.9, 0.5, 0.25;
  for (int degree = 1; degree <= 2; ++degree) {
    const ShapeValues sv = shape_functions(ElemType::Triangle, degree, pts);
    for (int p = 0; p < 3; ++p) {
      CHECK(sv.values.row(p).sum() == doctest::Approx(1.0).epsilon(1e-14));
      // gradients of a constant sum vanish
      CHECK(sv.grads[p].colwise().sum().cwiseAbs().maxCoeff() < 1e-14);
    }
  }
}

TEST_CASE("gradients match finite differences") {
  const double h = 1e-6;
  Eigen::MatrixXd pt(1, 2);
  pt << 0.31, 0.22;
  for (int degree = 1; degree <= 2; ++degree) {
    const ShapeValues sv = shape_functions(ElemType::Triangle, degree, pt);
    for (int dir = 0; dir < 2; ++dir) {
      Eigen::MatrixXd pp = pt, pm = pt;
      pp(0, dir) += h;
      pm(0, dir) -= h;
      const ShapeValues svp = shape_functions(ElemType::Triangle, degree, pp);
      const ShapeValues svm = shape_functions(ElemType::Triangle, degree, pm);
      for (int j = 0; j < sv.values.cols(); ++j) {
        const double fd = (svp.values(0, j) - svm.values(0, j)) / (2.0 * h);
        CHECK(sv.grads[0](j, dir) == doctest::Approx(fd).epsilon(1e-7));
      }
    }
  }
}

TEST_CASE("interval quadrature against monomial integrals") {
  const QuadratureRule mid = quadrature(ElemType::Interval, 1);
  CHECK(mid.points.rows() == 1);
  CHECK(mid.points(0, 0) == doctest::Approx(0.5));
  CHECK(mid.weights(0) == doctest::Approx(1.0));

  const QuadratureRule g3 = quadrature(ElemType::Interval, 5);
  CHECK(g3.points.rows() == 3);
  CHECK(std::abs(integrate_interval(g3, 5) - interval_monomial(5)) < 1e-15);

  for (int deg = 0; deg <= 6; ++deg) {
    const QuadratureRule rule = quadrature(ElemType::Interval, deg);
    CHECK(rule.weights.minCoeff() > 0.0);
    CHECK(rule.weights.sum() == doctest::Approx(1.0).epsilon(1e-14));
    for (int k = 0; k <= deg; ++k)
      CHECK(std::abs(integrate_interval(rule, k) - interval_monomial(k)) < 1e-14);
  }
  CHECK_THROWS_AS(quadrature(ElemType::Interval, 7), std::invalid_argument);
}

TEST_CASE("triangle quadrature against monomial integrals") {
  const QuadratureRule d2 = quadrature(ElemType::Triangle, 2);
  CHECK(d2.points.rows() == 3);
  CHECK(std::abs(integrate_triangle(d2, 2, 0) - triangle_monomial(2, 0)) < 1e-15);
  CHECK(triangle_monomial(2, 0) == doctest::Approx(1.0 / 12.0));

  for (int deg = 0; deg <= 6; ++deg) {
    const QuadratureRule rule = quadrature(ElemType::Triangle, deg);
    CHECK(rule.weights.minCoeff() > 0.0);
    CHECK(rule.weights.sum() == doctest::Approx(0.5).epsilon(1e-13));
    for (int a = 0; a <= deg; ++a)
      for (int b = 0; a + b <= deg; ++b)
        CHECK(std::abs(integrate_triangle(rule, a, b) - triangle_monomial(a, b)) < 2e-14);
  }
  CHECK_THROWS_AS(quadrature(ElemType::Triangle, 7), std::invalid_argument);
}

TEST_CASE("unsupported degrees are rejected") {
  CHECK_THROWS_AS(local_node_count(ElemType::Interval, 3), std::invalid_argument);
  CHECK_THROWS_AS(shape_functions(ElemType::Triangle, 5, Eigen::MatrixXd::Zero(1, 2)),
                  std::invalid_argument);
}
