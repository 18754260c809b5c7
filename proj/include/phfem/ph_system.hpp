#ifndef PHFEM_PH_SYSTEM_HPP
#define PHFEM_PH_SYSTEM_HPP

#include "phfem/assembly.hpp"

namespace phfem {

// Time signal for a boundary input channel. `value` holds one entry per
// input component; kinds with a cutoff time apply for t <= t_off and
// vanish afterwards.
struct Signal {
  enum class Kind { Zero, Constant, Hold, RampDown, RampUp };
  Kind kind = Kind::Zero;
  Eigen::VectorXd value;
  double t_off = 0.0;

  Eigen::VectorXd eval(double t) const;
  Signal scaled(double factor) const;

  static Signal zero(int n);
  static Signal constant(Eigen::VectorXd value);
  static Signal hold(Eigen::VectorXd value, double t_off);
  static Signal ramp_down(Eigen::VectorXd value, double t_off);
  static Signal ramp_up(Eigen::VectorXd value, double t_off);
};

// Boundary port inputs: traction coefficients on the loaded Neumann
// boundary and imposed-velocity coefficients on the Dirichlet boundary.
struct BoundaryInput {
  Signal tau;
  Signal nu;
};

// Coefficient vectors of the mixed state plus the reconstructed
// displacement and the simulation clock.
struct State {
  Eigen::VectorXd v, S, F, u;
  double t = 0.0;
};

// The assembled finite-dimensional port-Hamiltonian model
//   Mv dv/dt = -K(F) S + Gtau tau,   MS dS/dt = K(F)^T v + Gnu(F) nu,
//   MF dF/dt = Z v,
// with H = (v^T Mv v + S^T MS S) / 2 and collocated outputs
// yN = Gtau^T v, yD = Gnu(F)^T S. The frozen-linear variant pins K and
// Gnu at F = I and drops the F dynamics, which reproduces the linear
// elastodynamics model on the same spaces.
class PHSystem {
public:
  enum class ModelKind { Nonlinear, FrozenLinear };

  PHSystem(Spaces spaces, Material material, BoundaryInput input,
           std::shared_ptr<const BoundaryBasis> traction_basis =
               std::make_shared<UniformBoundaryBasis>(),
           std::shared_ptr<const BoundaryBasis> velocity_basis =
               std::make_shared<UniformBoundaryBasis>());

  PHSystem frozen_linear() const;
  ModelKind model_kind() const { return kind_; }
  bool frozen() const { return kind_ == ModelKind::FrozenLinear; }

  const Mesh& mesh() const { return *spaces_.velocity->mesh_ptr(); }
  const Spaces& spaces() const { return spaces_; }
  const Material& material() const { return assembler_.material(); }
  const ConstantOperators& ops() const { return ops_; }
  const Assembler& assembler() const { return assembler_; }
  const BoundaryInput& input() const { return input_; }

  int n_v() const { return spaces_.velocity->dofs(); }
  int n_S() const { return spaces_.stress->dofs(); }
  int n_F() const { return spaces_.defgrad->dofs(); }
  int n() const { return n_v() + n_S() + n_F(); }
  int n_tau() const { return static_cast<int>(ops_.Gtau.cols()); }
  int n_nu() const { return assembler_.n_nu(); }

  // State with v = v0(X), S = S0(X), F = identity, u = 0 at t = 0.
  State initial_state(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& v0,
                      const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& S0) const;
  State zero_state() const;

  double hamiltonian(const State& state) const;

  // Mode-aware operators: frozen systems return the matrices pinned at
  // the identity deformation gradient.
  SparseMat K_at(const Eigen::VectorXd& F_hat) const;
  SparseMat Gnu_at(const Eigen::VectorXd& F_hat) const;
  JacobianBlocks jacobian_blocks(const Eigen::VectorXd& S_hat, const Eigen::VectorXd& v_hat,
                                 double t) const;

  // Right-hand side in pre-multiplied form (M xdot), stacked (v, S, F).
  Eigen::VectorXd rhs(const State& state, double t) const;

  struct Outputs {
    Eigen::VectorXd yN;  // velocity at the Neumann port, conjugate to tau
    Eigen::VectorXd yD;  // reaction traction at the Dirichlet port
  };
  Outputs outputs(const State& state) const;

  // Power through the ports for the midpoint step state_n -> state_np1.
  double midpoint_power(const State& state_n, const State& state_np1, double dt) const;
  // Discrete balance defect: H_{n+1} - H_n - dt * midpoint power. Zero up
  // to solver tolerance under the implicit midpoint rule.
  double power_balance_residual(const State& state_n, const State& state_np1, double dt) const;

  // The full skew-symmetric block operator J(F), including the -Z^T block
  // (its effort is zero, so it never enters the dynamics).
  SparseMat block_J(const Eigen::VectorXd& F_hat) const;

  // Interpolant of the identity deformation gradient.
  Eigen::VectorXd identity_F() const;

private:
  Spaces spaces_;
  BoundaryInput input_;
  Assembler assembler_;
  ConstantOperators ops_;
  ModelKind kind_ = ModelKind::Nonlinear;
  SparseMat K_frozen_, Gnu_frozen_;
};

}  // namespace phfem

#endif
