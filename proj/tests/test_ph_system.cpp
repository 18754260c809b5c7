#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "phfem/ph_system.hpp"
#include "test_util.hpp"

#include <random>

using namespace phfem;
using testutil::max_abs;

namespace {

PHSystem rod_system(int n = 20) {
  BoundaryInput input;
  input.nu = Signal::ramp_down(Eigen::VectorXd::Constant(1, 0.5), 0.2);
  input.tau = Signal::hold(Eigen::VectorXd::Constant(1, 100.0), 0.2);
  return PHSystem(testutil::rod_spaces(n), testutil::rod_material(), input);
}

PHSystem beam_system(int nx = 10, int ny = 2) {
  BoundaryInput input;
  input.nu = Signal::zero(2);
  Eigen::VectorXd tip(2);
  tip << 0.0, 0.1;
  input.tau = Signal::ramp_up(tip, 1.0);
  return PHSystem(testutil::beam_spaces(nx, ny), testutil::beam_material(), input);
}

State rod_initial(const PHSystem& sys) {
  return sys.initial_state(
      [](const Eigen::VectorXd&) { return Eigen::VectorXd::Constant(1, 0.5); },
      [](const Eigen::VectorXd&) { return Eigen::VectorXd::Zero(1); });
}

}  // namespace

TEST_CASE("signals") {
  const Signal ramp = Signal::ramp_down(Eigen::VectorXd::Constant(1, 0.5), 0.2);
  CHECK(ramp.eval(0.0)(0) == doctest::Approx(0.5));
  CHECK(ramp.eval(0.1)(0) == doctest::Approx(0.25));
  CHECK(ramp.eval(0.3)(0) == 0.0);

  const Signal hold = Signal::hold(Eigen::VectorXd::Constant(1, 100.0), 0.2);
  CHECK(hold.eval(0.2)(0) == 100.0);
  CHECK(hold.eval(0.2000001)(0) == 0.0);

  Eigen::VectorXd tip(2);
  tip << 0.0, 0.1;
  const Signal up = Signal::ramp_up(tip, 1.0);
  CHECK(up.eval(0.5)(1) == doctest::Approx(0.05));
  CHECK(up.eval(2.0)(1) == 0.0);
  CHECK(up.scaled(10.0).eval(0.5)(1) == doctest::Approx(0.5));
}

TEST_CASE("hamiltonian") {
  const PHSystem sys = rod_system(100);

  State zero = sys.zero_state();
  CHECK(sys.hamiltonian(zero) == 0.0);

  // v = 0.5 m/s everywhere, S = 0: H = rho0 L v^2 / 2 with rho0 L = 23.55 kg
  const State init = rod_initial(sys);
  CHECK(sys.hamiltonian(init) == doctest::Approx(2.94375).epsilon(1e-13));

  // independent of F and u
  State shifted = init;
  shifted.F.array() += 3.0;
  shifted.u.array() += 1.0;
  CHECK(sys.hamiltonian(shifted) == sys.hamiltonian(init));

  const PHSystem beam = beam_system();
  CHECK(sys.hamiltonian(zero) == 0.0);
  CHECK(beam.hamiltonian(beam.zero_state()) == 0.0);
}

TEST_CASE("rhs") {
  SUBCASE("zero state and zero inputs give zero") {
    BoundaryInput input;
    input.nu = Signal::zero(1);
    input.tau = Signal::zero(1);
    const PHSystem sys(testutil::rod_spaces(5), testutil::rod_material(), input);
    CHECK(sys.rhs(sys.zero_state(), 0.7).norm() == 0.0);
  }

  SUBCASE("interconnection transfers power without loss") {
    BoundaryInput input;
    input.nu = Signal::zero(1);
    input.tau = Signal::zero(1);
    const PHSystem sys(testutil::rod_spaces(9), testutil::rod_material(), input);
    std::mt19937 rng(81);
    for (int rep = 0; rep < 10; ++rep) {
      State s = sys.zero_state();
      s.v = testutil::random_vector(rng, sys.n_v());
      s.S = testutil::random_vector(rng, sys.n_S());
      s.F = testutil::random_vector(rng, sys.n_F());
      const Eigen::VectorXd r = sys.rhs(s, 0.0);
      const double power = s.v.dot(r.segment(0, sys.n_v())) +
                           s.S.dot(r.segment(sys.n_v(), sys.n_S()));
      const double scale = s.v.norm() * r.segment(0, sys.n_v()).norm() +
                           s.S.norm() * r.segment(sys.n_v(), sys.n_S()).norm();
      CHECK(std::abs(power) <= 1e-13 * std::max(1.0, scale));
    }
  }

  SUBCASE("uniform translation with no Dirichlet boundary is stationary") {
    auto mesh = std::make_shared<Mesh>(
        interval_mesh(3.0, 6, BoundaryTag::NeumannFree, BoundaryTag::NeumannLoaded));
    const Spaces sp = testutil::make_spaces(mesh, 1, 0, 0);
    BoundaryInput input;
    input.tau = Signal::zero(1);
    input.nu = Signal::zero(0);   // no Dirichlet port
    const PHSystem sys(sp, testutil::rod_material(), input);
    CHECK(sys.n_nu() == 0);

    State s = sys.zero_state();
    s.v.setConstant(0.37);
    const Eigen::VectorXd r = sys.rhs(s, 0.0);
    CHECK(r.segment(sys.n_v(), sys.n_S()).cwiseAbs().maxCoeff() <= 1e-13);
    CHECK(r.segment(sys.n_v() + sys.n_S(), sys.n_F()).cwiseAbs().maxCoeff() <= 1e-13);
  }
}

TEST_CASE("outputs") {
  const PHSystem sys = rod_system(8);
  std::mt19937 rng(83);

  State s = sys.zero_state();
  s.v = testutil::random_vector(rng, sys.n_v());
  const PHSystem::Outputs y0 = sys.outputs(s);
  // yN is the collocated velocity at X = L
  const double vL =
      sys.spaces().velocity->evaluate(s.v, Eigen::VectorXd::Constant(1, 3.0))(0);
  CHECK(y0.yN(0) == doctest::Approx(vL).epsilon(1e-13));
  CHECK(y0.yD.norm() == 0.0);  // S = 0

  // prestressed one-cell rod: yD = -F S at X = 0
  auto mesh = std::make_shared<Mesh>(interval_mesh(1.0, 1));
  const Spaces sp = testutil::make_spaces(mesh, 1, 0, 0);
  BoundaryInput input;
  input.nu = Signal::zero(1);
  input.tau = Signal::zero(1);
  const PHSystem one(sp, testutil::rod_material(), input);
  State ps = one.zero_state();
  ps.S.setConstant(42.0);
  ps.F.setConstant(1.0);
  CHECK(one.outputs(ps).yD(0) == doctest::Approx(-42.0).epsilon(1e-14));
}

TEST_CASE("block operator is exactly skew-symmetric") {
  std::mt19937 rng(89);
  const PHSystem rod = rod_system(12);
  const PHSystem beam = beam_system(8, 2);
  for (const PHSystem* sys : {&rod, &beam}) {
    for (int rep = 0; rep < 5; ++rep) {
      const Eigen::VectorXd F_hat = testutil::random_vector(rng, sys->n_F());
      const SparseMat J = sys->block_J(F_hat);
      const SparseMat sum = J + SparseMat(J.transpose());
      CHECK(max_abs(sum) == 0.0);
    }
  }
}

TEST_CASE("frozen linear variant") {
  const PHSystem sys = rod_system(10);
  const PHSystem lin = sys.frozen_linear();
  CHECK(lin.frozen());

  std::mt19937 rng(91);
  const Eigen::VectorXd F_random = testutil::random_vector(rng, sys.n_F());
  // K is pinned at the identity deformation gradient
  CHECK(max_abs(SparseMat(lin.K_at(F_random) - sys.K_at(sys.identity_F()))) == 0.0);

  // F dynamics removed
  State s = lin.zero_state();
  s.v = testutil::random_vector(rng, lin.n_v());
  const Eigen::VectorXd r = lin.rhs(s, 0.05);
  CHECK(r.segment(lin.n_v() + lin.n_S(), lin.n_F()).norm() == 0.0);
  CHECK(sys.rhs(s, 0.05).segment(sys.n_v() + sys.n_S(), sys.n_F()).norm() > 0.0);

  // jacobian blocks vanish
  const JacobianBlocks blocks = lin.jacobian_blocks(s.S, s.v, 0.05);
  CHECK(blocks.dKS_dF.nonZeros() == 0);
  CHECK(blocks.dKtV_dF.nonZeros() == 0);
  CHECK(blocks.dGnuNu_dF.nonZeros() == 0);
}

TEST_CASE("power balance residual of equal zero-input states vanishes") {
  BoundaryInput input;
  input.nu = Signal::zero(1);
  input.tau = Signal::zero(1);
  const PHSystem sys(testutil::rod_spaces(6), testutil::rod_material(), input);
  std::mt19937 rng(93);
  State s = sys.zero_state();
  s.v = testutil::random_vector(rng, sys.n_v());
  s.S = testutil::random_vector(rng, sys.n_S());
  CHECK(sys.power_balance_residual(s, s, 1e-3) == 0.0);
}

TEST_CASE("input size validation") {
  BoundaryInput bad;
  bad.nu = Signal::zero(2);   // rod needs one component
  bad.tau = Signal::zero(1);
  CHECK_THROWS_AS(PHSystem(testutil::rod_spaces(4), testutil::rod_material(), bad),
                  std::invalid_argument);
}
