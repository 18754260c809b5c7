#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "phfem/voigt.hpp"
#include "test_util.hpp"

#include <random>

using namespace phfem;
using voigt::Dim;

TEST_CASE("index ordering per dimension") {
  using P = std::pair<int, int>;
  CHECK(voigt::index_order(Dim(1)) == std::vector<P>{{0, 0}});
  CHECK(voigt::index_order(Dim(2)) == std::vector<P>{{0, 0}, {1, 1}, {0, 1}, {1, 0}});
  CHECK(voigt::index_order(Dim(3)) ==
        std::vector<P>{{0, 0}, {1, 1}, {2, 2}, {0, 1}, {1, 2}, {2, 0}, {0, 2}, {1, 0}, {2, 1}});
  for (int d = 1; d <= 3; ++d) {
    const auto& order = voigt::index_order(Dim(d));
    for (int k = 0; k < d; ++k) {
      CHECK(order[k].first == k);   // diagonal pairs lead
      CHECK(order[k].second == k);
    }
  }
}

TEST_CASE("grad_vec round trip is the identity") {
  std::mt19937 rng(7);
  for (int d = 1; d <= 3; ++d) {
    const Dim dim(d);
    for (int rep = 0; rep < 20; ++rep) {
      const Eigen::MatrixXd G = testutil::random_matrix(rng, d, d);
      CHECK((voigt::grad_unvec(dim, voigt::grad_vec(G)) - G).norm() == 0.0);
    }
    const Eigen::VectorXd g = testutil::random_vector(rng, dim.grad());
    CHECK((voigt::grad_vec(voigt::grad_unvec(dim, g)) - g).norm() == 0.0);
  }
}

TEST_CASE("green strain examples") {
  CHECK(voigt::green_strain(Eigen::MatrixXd::Identity(3, 3)).norm() == 0.0);

  Eigen::MatrixXd F = Eigen::Vector3d(2.0, 1.0, 1.0).asDiagonal();
  Eigen::MatrixXd E = voigt::green_strain(F);
  CHECK(E(0, 0) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(E(1, 1) == doctest::Approx(0.0));
  CHECK(E(2, 2) == doctest::Approx(0.0));

  Eigen::MatrixXd Fs(2, 2);
  Fs << 1.0, 0.1, 0.0, 1.0;
  Eigen::MatrixXd Es = voigt::green_strain(Fs);
  CHECK(Es(0, 0) == doctest::Approx(0.0));
  CHECK(Es(0, 1) == doctest::Approx(0.05).epsilon(1e-14));
  CHECK(Es(1, 0) == doctest::Approx(0.05).epsilon(1e-14));
  CHECK(Es(1, 1) == doctest::Approx(0.005).epsilon(1e-14));
}

TEST_CASE("green strain is exactly symmetric and warns on inversion") {
  std::mt19937 rng(11);
  for (int rep = 0; rep < 50; ++rep) {
    Eigen::MatrixXd F =
        Eigen::MatrixXd::Identity(3, 3) + 0.5 * testutil::random_matrix(rng, 3, 3);
    if (F.determinant() <= 0.0) continue;
    const Eigen::MatrixXd E = voigt::green_strain(F);
    CHECK((E - E.transpose()).norm() == 0.0);
  }

  int warnings = 0;
  voigt::set_warning_handler([&](const std::string&) { ++warnings; });
  Eigen::MatrixXd flipped = Eigen::Vector2d(-1.0, 1.0).asDiagonal();  // det = -1
  voigt::green_strain(flipped);
  CHECK(warnings == 1);
  voigt::set_warning_handler([](const std::string&) {});  // silence for remaining tests
}

TEST_CASE("stress/strain pairing reproduces the full contraction") {
  std::mt19937 rng(13);
  for (int d = 1; d <= 3; ++d) {
    for (int rep = 0; rep < 100; ++rep) {
      const Eigen::MatrixXd S = testutil::random_symmetric(rng, d);
      const Eigen::MatrixXd E = testutil::random_symmetric(rng, d);
      const double direct = testutil::oracle_contract(S, E);
      const double paired = voigt::stress_voigt(S).dot(voigt::strain_voigt(E));
      CHECK(paired == doctest::Approx(direct).epsilon(1e-14));
    }
  }
}

TEST_CASE("strain rate") {
  SUBCASE("linearizes to the symmetric gradient at F = I") {
    std::mt19937 rng(17);
    for (int d = 1; d <= 3; ++d) {
      const Eigen::MatrixXd G = testutil::random_symmetric(rng, d);
      const Eigen::VectorXd rate =
          voigt::strain_rate(Eigen::MatrixXd::Identity(d, d), G);
      CHECK((rate - voigt::strain_voigt(G)).norm() < 1e-15);
    }
  }
  SUBCASE("scalar case") {
    Eigen::MatrixXd F(1, 1), G(1, 1);
    F << 1.2;
    G << 3.0;
    CHECK(voigt::strain_rate(F, G)(0) == doctest::Approx(3.6).epsilon(1e-15));
  }
  SUBCASE("vanishes along rigid rotations") {
    std::mt19937 rng(19);
    std::uniform_real_distribution<double> angle(-3.0, 3.0);
    for (int rep = 0; rep < 100; ++rep) {
      const Eigen::MatrixXd R = testutil::rotation2(angle(rng));
      // dR/dt = Omega R with Omega skew
      Eigen::MatrixXd Omega(2, 2);
      const double w = angle(rng);
      Omega << 0.0, -w, w, 0.0;
      CHECK(voigt::strain_rate(R, Omega * R).norm() <= 1e-13);

      const Eigen::Vector3d axis = testutil::random_vector(rng, 3);
      const Eigen::MatrixXd R3 = testutil::rotation3(axis, angle(rng));
      const Eigen::MatrixXd A = testutil::random_matrix(rng, 3, 3);
      const Eigen::MatrixXd W = 0.5 * (A - A.transpose());
      CHECK(voigt::strain_rate(R3, R3 * W).norm() <= 1e-13);
    }
  }
  SUBCASE("matches the time derivative of the Green strain") {
    std::mt19937 rng(23);
    const double h = 1e-5;
    for (int d = 1; d <= 3; ++d) {
      const Dim dim(d);
      const Eigen::MatrixXd F0 =
          Eigen::MatrixXd::Identity(d, d) + 0.3 * testutil::random_matrix(rng, d, d);
      const Eigen::MatrixXd F1 = testutil::random_matrix(rng, d, d);
      const Eigen::MatrixXd dE_fd =
          (voigt::green_strain(F0 + h * F1) - voigt::green_strain(F0 - h * F1)) / (2.0 * h);
      const Eigen::MatrixXd dE = voigt::strain_unvoigt(dim, voigt::strain_rate(F0, F1));
      CHECK((dE - dE_fd).norm() < 1e-9);
    }
  }
}

TEST_CASE("f_matrix identities against dense oracles") {
  std::mt19937 rng(29);
  CHECK(voigt::f_matrix(Eigen::MatrixXd::Identity(1, 1))(0, 0) == 1.0);

  for (int d = 1; d <= 3; ++d) {
    double worst = 0.0;
    for (int rep = 0; rep < 120; ++rep) {
      const Eigen::MatrixXd F = testutil::random_matrix(rng, d, d);
      const Eigen::MatrixXd Fm = voigt::f_matrix(F);

      const Eigen::MatrixXd S = testutil::random_symmetric(rng, d);
      const Eigen::VectorXd lhs1 = testutil::oracle_matvec(Fm, voigt::stress_voigt(S));
      const Eigen::VectorXd rhs1 = voigt::grad_vec(testutil::oracle_matmul(F, S));
      worst = std::max(worst, (lhs1 - rhs1).cwiseAbs().maxCoeff());

      const Eigen::MatrixXd G = testutil::random_matrix(rng, d, d);
      const Eigen::VectorXd lhs2 =
          testutil::oracle_matvec(Fm.transpose(), voigt::grad_vec(G));
      const Eigen::VectorXd rhs2 = voigt::strain_voigt(
          testutil::oracle_sym(testutil::oracle_matmul(F.transpose(), G)));
      worst = std::max(worst, (lhs2 - rhs2).cwiseAbs().maxCoeff());
    }
    CHECK(worst < 1e-13);
  }
}

TEST_CASE("f_matrix entry formula") {
  std::mt19937 rng(31);
  for (int d = 2; d <= 3; ++d) {
    const Dim dim(d);
    const Eigen::MatrixXd F = testutil::random_matrix(rng, d, d);
    const Eigen::MatrixXd Fm = voigt::f_matrix(F);
    const auto& order = voigt::index_order(dim);
    for (int r = 0; r < dim.grad(); ++r)
      for (int k = 0; k < d; ++k)
        for (int l = k; l < d; ++l) {
          const auto [i, j] = order[r];
          double expected = (l == j) ? F(i, k) : 0.0;
          if (k != l && k == j) expected += F(i, l);
          CHECK(Fm(r, voigt::sym_index(dim, k, l)) == expected);
        }
  }
}

TEST_CASE("f_matrix is linear and spanned by the unit tensors") {
  std::mt19937 rng(37);
  for (int d = 1; d <= 3; ++d) {
    const Dim dim(d);
    const Eigen::MatrixXd F = testutil::random_matrix(rng, d, d);
    const Eigen::VectorXd fq = voigt::grad_vec(F);
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(dim.grad(), dim.sym());
    const auto& units = voigt::f_matrix_units(dim);
    for (int k = 0; k < dim.grad(); ++k) sum += fq(k) * units[k];
    CHECK((sum - voigt::f_matrix(F)).norm() < 1e-15);
  }
}

TEST_CASE("normal matrix") {
  CHECK(voigt::normal_matrix(Eigen::VectorXd::Constant(1, 1.0))(0, 0) == 1.0);

  Eigen::VectorXd N2(2);
  N2 << 0.0, -1.0;
  Eigen::MatrixXd G2(2, 2);
  G2 << 1.0, 2.0, 3.0, 4.0;
  const Eigen::VectorXd GN = voigt::normal_matrix(N2) * voigt::grad_vec(G2);
  CHECK(GN(0) == doctest::Approx(-2.0));
  CHECK(GN(1) == doctest::Approx(-4.0));

  std::mt19937 rng(41);
  for (int d = 2; d <= 3; ++d) {
    for (int rep = 0; rep < 100; ++rep) {
      Eigen::VectorXd N = testutil::random_vector(rng, d);
      N.normalize();
      const Eigen::MatrixXd G = testutil::random_matrix(rng, d, d);
      const Eigen::VectorXd lhs = voigt::normal_matrix(N) * voigt::grad_vec(G);
      const Eigen::VectorXd rhs = testutil::oracle_matvec(G, N);
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-14);
    }
  }

  Eigen::VectorXd e1 = Eigen::Vector3d(1.0, 0.0, 0.0);
  const Eigen::MatrixXd G = testutil::random_matrix(rng, 3, 3);
  const Eigen::VectorXd first = voigt::normal_matrix(e1) * voigt::grad_vec(G);
  CHECK((first - G.col(0)).norm() == 0.0);

  CHECK_THROWS_AS(voigt::normal_matrix(Eigen::Vector2d(1.0, 1.0)), std::invalid_argument);
}

TEST_CASE("elasticity matrices") {
  SUBCASE("lambda = 0, mu = 1, d = 3") {
    const auto el = voigt::Elasticity::isotropic(0.0, 1.0, Dim(3));
    Eigen::VectorXd diag(6);
    diag << 2, 2, 2, 1, 1, 1;
    CHECK((el.C - Eigen::MatrixXd(diag.asDiagonal())).norm() == 0.0);
  }
  SUBCASE("beam parameters, d = 2 plane stress") {
    const auto el = voigt::Elasticity::isotropic(329.67, 384.62, Dim(2));
    Eigen::MatrixXd expected(3, 3);
    expected << 1098.91, 329.67, 0.0, 329.67, 1098.91, 0.0, 0.0, 0.0, 384.62;
    CHECK((el.C - expected).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("rod stiffness from E and A") {
    // E = 1000 N/mm^2, A = 100 mm^2 in SI units
    const auto el = voigt::Elasticity::rod(1000.0e6 * 100.0e-6);
    CHECK(el.C(0, 0) == doctest::Approx(1.0e5).epsilon(1e-15));
  }
  SUBCASE("inverse and definiteness") {
    for (int d = 1; d <= 3; ++d) {
      const auto el = d == 1 ? voigt::Elasticity::rod(1.0e5)
                             : voigt::Elasticity::isotropic(329.67, 384.62, Dim(d));
      const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(el.C.rows(), el.C.cols());
      CHECK((el.C * el.Cinv - I).cwiseAbs().maxCoeff() < 1e-12);
      CHECK((el.C - el.C.transpose()).norm() == 0.0);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(el.C);
      CHECK(eig.eigenvalues().minCoeff() > 0.0);
    }
  }
  SUBCASE("indefinite parameters are rejected with a direction") {
    try {
      voigt::Elasticity::isotropic(-1.0, 0.1, Dim(3));  // 3 lambda + 2 mu < 0
      FAIL("expected invalid_argument");
    } catch (const std::invalid_argument& e) {
      CHECK(std::string(e.what()).find("direction") != std::string::npos);
    }
    CHECK_THROWS_AS(voigt::Elasticity::isotropic(1.0, -1.0, Dim(2)), std::invalid_argument);
    CHECK_THROWS_AS(voigt::Elasticity::rod(-5.0), std::invalid_argument);
  }
}
