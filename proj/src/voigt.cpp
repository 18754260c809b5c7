#include "phfem/voigt.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace phfem::voigt {

namespace {

std::function<void(const std::string&)>& warning_handler() {
  static std::function<void(const std::string&)> handler =
      [](const std::string& msg) { std::cerr << "phfem warning: " << msg << "\n"; };
  return handler;
}

}  // namespace

void set_warning_handler(std::function<void(const std::string&)> handler) {
  warning_handler() = std::move(handler);
}

void warn(const std::string& message) { warning_handler()(message); }

Dim::Dim(int d) : d_(d) {
  if (d < 1 || d > 3) throw std::invalid_argument("spatial dimension must be 1, 2 or 3");
}

const std::vector<std::pair<int, int>>& index_order(Dim dim) {
  // Diagonal pairs first, then the cyclic off-diagonals and their mirrors.
  static const std::vector<std::pair<int, int>> order1 = {{0, 0}};
  static const std::vector<std::pair<int, int>> order2 = {{0, 0}, {1, 1}, {0, 1}, {1, 0}};
  static const std::vector<std::pair<int, int>> order3 = {
      {0, 0}, {1, 1}, {2, 2}, {0, 1}, {1, 2}, {2, 0}, {0, 2}, {1, 0}, {2, 1}};
  switch (dim.d()) {
    case 1: return order1;
    case 2: return order2;
    default: return order3;
  }
}

int grad_index(Dim dim, int i, int j) {
  const auto& order = index_order(dim);
  for (int k = 0; k < static_cast<int>(order.size()); ++k)
    if (order[k].first == i && order[k].second == j) return k;
  throw std::out_of_range("grad_index: component out of range");
}

const Eigen::MatrixXi& grad_index_table(Dim dim) {
  static std::array<Eigen::MatrixXi, 3> cache;
  auto& table = cache[dim.d() - 1];
  if (table.size() == 0) {
    table.resize(dim.d(), dim.d());
    for (int i = 0; i < dim.d(); ++i)
      for (int j = 0; j < dim.d(); ++j) table(i, j) = grad_index(dim, i, j);
  }
  return table;
}

int sym_index(Dim dim, int i, int j) {
  if (i == j) return i;
  // Off-diagonal pairs appear once, in the order they first occur in the
  // gradient list.
  const auto& order = index_order(dim);
  int pos = dim.d();
  for (int k = dim.d(); k < static_cast<int>(order.size()); ++k) {
    auto [a, b] = order[k];
    if (a > b) continue;  // mirror entry
    if ((a == i && b == j) || (a == j && b == i)) return pos;
    ++pos;
  }
  throw std::out_of_range("sym_index: component out of range");
}

Eigen::VectorXd stress_voigt(const Eigen::MatrixXd& S) {
  Dim dim(static_cast<int>(S.rows()));
  Eigen::VectorXd s(dim.sym());
  for (int i = 0; i < dim.d(); ++i)
    for (int j = i; j < dim.d(); ++j) s(sym_index(dim, i, j)) = S(i, j);
  return s;
}

Eigen::MatrixXd stress_unvoigt(Dim dim, const Eigen::VectorXd& s) {
  if (s.size() != dim.sym()) throw std::invalid_argument("stress_unvoigt: size mismatch");
  Eigen::MatrixXd S(dim.d(), dim.d());
  for (int i = 0; i < dim.d(); ++i)
    for (int j = 0; j < dim.d(); ++j) S(i, j) = s(sym_index(dim, i, j));
  return S;
}

Eigen::VectorXd strain_voigt(const Eigen::MatrixXd& E) {
  Dim dim(static_cast<int>(E.rows()));
  Eigen::VectorXd e(dim.sym());
  for (int i = 0; i < dim.d(); ++i)
    for (int j = i; j < dim.d(); ++j)
      e(sym_index(dim, i, j)) = (i == j) ? E(i, j) : E(i, j) + E(j, i);
  return e;
}

Eigen::MatrixXd strain_unvoigt(Dim dim, const Eigen::VectorXd& e) {
  if (e.size() != dim.sym()) throw std::invalid_argument("strain_unvoigt: size mismatch");
  Eigen::MatrixXd E(dim.d(), dim.d());
  for (int i = 0; i < dim.d(); ++i)
    for (int j = 0; j < dim.d(); ++j)
      E(i, j) = (i == j) ? e(sym_index(dim, i, j)) : 0.5 * e(sym_index(dim, i, j));
  return E;
}

Eigen::VectorXd grad_vec(const Eigen::MatrixXd& G) {
  Dim dim(static_cast<int>(G.rows()));
  const auto& order = index_order(dim);
  Eigen::VectorXd g(dim.grad());
  for (int k = 0; k < dim.grad(); ++k) g(k) = G(order[k].first, order[k].second);
  return g;
}

Eigen::MatrixXd grad_unvec(Dim dim, const Eigen::VectorXd& g) {
  if (g.size() != dim.grad()) throw std::invalid_argument("grad_unvec: size mismatch");
  const auto& order = index_order(dim);
  Eigen::MatrixXd G(dim.d(), dim.d());
  for (int k = 0; k < dim.grad(); ++k) G(order[k].first, order[k].second) = g(k);
  return G;
}

Eigen::VectorXd identity_grad_vec(Dim dim) {
  return grad_vec(Eigen::MatrixXd::Identity(dim.d(), dim.d()));
}

Eigen::MatrixXd green_strain(const Eigen::MatrixXd& F) {
  const int d = static_cast<int>(F.rows());
  if (F.determinant() <= 0.0) {
    std::ostringstream msg;
    msg << "green_strain: det F = " << F.determinant() << " <= 0 (element inversion)";
    warn(msg.str());
  }
  Eigen::MatrixXd A = F.transpose() * F;
  Eigen::MatrixXd E(d, d);
  for (int i = 0; i < d; ++i) {
    E(i, i) = 0.5 * (A(i, i) - 1.0);
    for (int j = i + 1; j < d; ++j) {
      const double off = 0.25 * (A(i, j) + A(j, i));
      E(i, j) = off;
      E(j, i) = off;
    }
  }
  return E;
}

Eigen::VectorXd strain_rate(const Eigen::MatrixXd& F, const Eigen::MatrixXd& G) {
  Dim dim(static_cast<int>(F.rows()));
  Eigen::MatrixXd H = F.transpose() * G;
  Eigen::VectorXd e(dim.sym());
  for (int i = 0; i < dim.d(); ++i)
    for (int j = i; j < dim.d(); ++j)
      e(sym_index(dim, i, j)) = (i == j) ? H(i, i) : H(i, j) + H(j, i);
  return e;
}

Eigen::MatrixXd f_matrix(const Eigen::MatrixXd& F) {
  Dim dim(static_cast<int>(F.rows()));
  const auto& order = index_order(dim);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(dim.grad(), dim.sym());
  for (int r = 0; r < dim.grad(); ++r) {
    auto [i, j] = order[r];
    for (int k = 0; k < dim.d(); ++k)
      for (int l = k; l < dim.d(); ++l) {
        double v = (l == j) ? F(i, k) : 0.0;
        if (k != l && k == j) v += F(i, l);
        if (v != 0.0) M(r, sym_index(dim, k, l)) = v;
      }
  }
  return M;
}

const std::vector<Eigen::MatrixXd>& f_matrix_units(Dim dim) {
  static std::array<std::vector<Eigen::MatrixXd>, 3> cache;
  auto& units = cache[dim.d() - 1];
  if (units.empty()) {
    const auto& order = index_order(dim);
    for (int k = 0; k < dim.grad(); ++k) {
      Eigen::MatrixXd Ek = Eigen::MatrixXd::Zero(dim.d(), dim.d());
      Ek(order[k].first, order[k].second) = 1.0;
      units.push_back(f_matrix(Ek));
    }
  }
  return units;
}

Eigen::MatrixXd normal_matrix(const Eigen::VectorXd& N) {
  Dim dim(static_cast<int>(N.size()));
  if (std::abs(N.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("normal_matrix: normal is not unit length");
  const auto& order = index_order(dim);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(dim.d(), dim.grad());
  for (int k = 0; k < dim.grad(); ++k) M(order[k].first, k) = N(order[k].second);
  return M;
}

Elasticity Elasticity::isotropic(double lambda, double mu, Dim dim) {
  const int d = dim.d();
  const int m = dim.sym();
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) C(i, j) = (i == j) ? lambda + 2.0 * mu : lambda;
  for (int s = d; s < m; ++s) C(s, s) = mu;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(C);
  if (eig.eigenvalues().minCoeff() <= 0.0) {
    int k = 0;
    eig.eigenvalues().minCoeff(&k);
    std::ostringstream msg;
    msg << "elasticity matrix not positive definite: eigenvalue "
        << eig.eigenvalues()(k) << " along direction ["
        << eig.eigenvectors().col(k).transpose() << "]";
    throw std::invalid_argument(msg.str());
  }
  Elasticity out;
  out.C = C;
  out.Cinv = C.inverse();
  return out;
}

Elasticity Elasticity::rod(double EA) {
  if (EA <= 0.0)
    throw std::invalid_argument("rod stiffness EA must be positive, got " + std::to_string(EA));
  Elasticity out;
  out.C = Eigen::MatrixXd::Constant(1, 1, EA);
  out.Cinv = Eigen::MatrixXd::Constant(1, 1, 1.0 / EA);
  return out;
}

}  // namespace phfem::voigt
