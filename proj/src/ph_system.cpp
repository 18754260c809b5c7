#include "phfem/ph_system.hpp"

#include <stdexcept>

namespace phfem {

Eigen::VectorXd Signal::eval(double t) const {
  switch (kind) {
    case Kind::Zero: return Eigen::VectorXd::Zero(value.size());
    case Kind::Constant: return value;
    case Kind::Hold: return t <= t_off ? value : Eigen::VectorXd::Zero(value.size());
    case Kind::RampDown:
      return t <= t_off ? ((1.0 - t / t_off) * value).eval()
                        : Eigen::VectorXd::Zero(value.size());
    case Kind::RampUp:
      return t <= t_off ? ((t / t_off) * value).eval() : Eigen::VectorXd::Zero(value.size());
  }
  return Eigen::VectorXd::Zero(value.size());
}

Signal Signal::scaled(double factor) const {
  Signal s = *this;
  s.value *= factor;
  return s;
}

Signal Signal::zero(int n) {
  Signal s;
  s.kind = Kind::Zero;
  s.value = Eigen::VectorXd::Zero(n);
  return s;
}

Signal Signal::constant(Eigen::VectorXd value) {
  Signal s;
  s.kind = Kind::Constant;
  s.value = std::move(value);
  return s;
}

Signal Signal::hold(Eigen::VectorXd value, double t_off) {
  Signal s;
  s.kind = Kind::Hold;
  s.value = std::move(value);
  s.t_off = t_off;
  return s;
}

Signal Signal::ramp_down(Eigen::VectorXd value, double t_off) {
  Signal s;
  s.kind = Kind::RampDown;
  s.value = std::move(value);
  s.t_off = t_off;
  return s;
}

Signal Signal::ramp_up(Eigen::VectorXd value, double t_off) {
  Signal s;
  s.kind = Kind::RampUp;
  s.value = std::move(value);
  s.t_off = t_off;
  return s;
}

PHSystem::PHSystem(Spaces spaces, Material material, BoundaryInput input,
                   std::shared_ptr<const BoundaryBasis> traction_basis,
                   std::shared_ptr<const BoundaryBasis> velocity_basis)
    : spaces_(spaces),
      input_(std::move(input)),
      assembler_(std::move(spaces), std::move(material), std::move(traction_basis),
                 std::move(velocity_basis)) {
  ops_ = assembler_.assemble_constant();
  if (input_.tau.value.size() != n_tau())
    throw std::invalid_argument("traction input size does not match the loaded boundary");
  if (input_.nu.value.size() != n_nu())
    throw std::invalid_argument("velocity input size does not match the Dirichlet boundary");
}

Eigen::VectorXd PHSystem::identity_F() const {
  const voigt::Dim dim(mesh().dim());
  const Eigen::VectorXd id = voigt::identity_grad_vec(dim);
  return spaces_.defgrad->interpolate([&](const Eigen::VectorXd&) { return id; });
}

PHSystem PHSystem::frozen_linear() const {
  PHSystem sys = *this;
  sys.kind_ = ModelKind::FrozenLinear;
  const Eigen::VectorXd Fid = identity_F();
  sys.K_frozen_ = assembler_.assemble_K(Fid);
  sys.Gnu_frozen_ = n_nu() > 0 ? assembler_.assemble_Gnu(Fid) : SparseMat(n_S(), 0);
  return sys;
}

State PHSystem::initial_state(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& v0,
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& S0) const {
  State s;
  s.v = spaces_.velocity->interpolate(v0);
  s.S = spaces_.stress->interpolate(S0);
  s.F = identity_F();
  s.u = Eigen::VectorXd::Zero(n_v());
  s.t = 0.0;
  return s;
}

State PHSystem::zero_state() const {
  State s;
  s.v = Eigen::VectorXd::Zero(n_v());
  s.S = Eigen::VectorXd::Zero(n_S());
  s.F = identity_F();
  s.u = Eigen::VectorXd::Zero(n_v());
  s.t = 0.0;
  return s;
}

double PHSystem::hamiltonian(const State& state) const {
  return 0.5 * state.v.dot(ops_.Mv * state.v) + 0.5 * state.S.dot(ops_.MS * state.S);
}

SparseMat PHSystem::K_at(const Eigen::VectorXd& F_hat) const {
  return frozen() ? K_frozen_ : assembler_.assemble_K(F_hat);
}

SparseMat PHSystem::Gnu_at(const Eigen::VectorXd& F_hat) const {
  if (n_nu() == 0) return SparseMat(n_S(), 0);
  return frozen() ? Gnu_frozen_ : assembler_.assemble_Gnu(F_hat);
}

JacobianBlocks PHSystem::jacobian_blocks(const Eigen::VectorXd& S_hat,
                                         const Eigen::VectorXd& v_hat, double t) const {
  if (frozen()) {
    JacobianBlocks blocks;
    blocks.dKS_dF = SparseMat(n_v(), n_F());
    blocks.dKtV_dF = SparseMat(n_S(), n_F());
    blocks.dGnuNu_dF = SparseMat(n_S(), n_F());
    return blocks;
  }
  return assembler_.assemble_jacobian_blocks(S_hat, v_hat, input_.nu.eval(t));
}

Eigen::VectorXd PHSystem::rhs(const State& state, double t) const {
  const SparseMat K = K_at(state.F);
  Eigen::VectorXd out(n());
  out.segment(0, n_v()) = -(K * state.S);
  if (n_tau() > 0) out.segment(0, n_v()) += ops_.Gtau * input_.tau.eval(t);
  out.segment(n_v(), n_S()) = K.transpose() * state.v;
  if (n_nu() > 0) out.segment(n_v(), n_S()) += Gnu_at(state.F) * input_.nu.eval(t);
  if (frozen())
    out.segment(n_v() + n_S(), n_F()).setZero();
  else
    out.segment(n_v() + n_S(), n_F()) = ops_.Z * state.v;
  return out;
}

PHSystem::Outputs PHSystem::outputs(const State& state) const {
  Outputs y;
  y.yN = ops_.Gtau.transpose() * state.v;
  y.yD = Gnu_at(state.F).transpose() * state.S;
  return y;
}

double PHSystem::midpoint_power(const State& state_n, const State& state_np1, double dt) const {
  const double tm = state_n.t + 0.5 * dt;
  const Eigen::VectorXd v_mid = 0.5 * (state_n.v + state_np1.v);
  const Eigen::VectorXd S_mid = 0.5 * (state_n.S + state_np1.S);
  double power = 0.0;
  if (n_tau() > 0) power += v_mid.dot(ops_.Gtau * input_.tau.eval(tm));
  if (n_nu() > 0) {
    const Eigen::VectorXd F_mid = 0.5 * (state_n.F + state_np1.F);
    power += S_mid.dot(Gnu_at(F_mid) * input_.nu.eval(tm));
  }
  return power;
}

double PHSystem::power_balance_residual(const State& state_n, const State& state_np1,
                                        double dt) const {
  return hamiltonian(state_np1) - hamiltonian(state_n) -
         dt * midpoint_power(state_n, state_np1, dt);
}

SparseMat PHSystem::block_J(const Eigen::VectorXd& F_hat) const {
  const SparseMat K = K_at(F_hat);
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(2 * (K.nonZeros() + ops_.Z.nonZeros()));
  const int ov = 0, oS = n_v(), oF = n_v() + n_S();
  for (int k = 0; k < K.outerSize(); ++k)
    for (SparseMat::InnerIterator it(K, k); it; ++it) {
      t.emplace_back(ov + static_cast<int>(it.row()), oS + static_cast<int>(it.col()),
                     -it.value());
      t.emplace_back(oS + static_cast<int>(it.col()), ov + static_cast<int>(it.row()),
                     it.value());
    }
  for (int k = 0; k < ops_.Z.outerSize(); ++k)
    for (SparseMat::InnerIterator it(ops_.Z, k); it; ++it) {
      t.emplace_back(oF + static_cast<int>(it.row()), ov + static_cast<int>(it.col()),
                     it.value());
      t.emplace_back(ov + static_cast<int>(it.col()), oF + static_cast<int>(it.row()),
                     -it.value());
    }
  SparseMat J(n(), n());
  J.setFromTriplets(t.begin(), t.end());
  return J;
}

}  // namespace phfem
