#ifndef PHFEM_INTEGRATOR_HPP
#define PHFEM_INTEGRATOR_HPP

#include "phfem/ph_system.hpp"

#include <Eigen/SparseLU>
#include <functional>
#include <optional>
#include <stdexcept>

namespace phfem {

enum class JacobianMode { Analytic, FiniteDifference };

struct IntegratorConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  // Convergence threshold on ||R|| / max(1, ||M x_n||).
  double newton_tol = 1e-10;
  int max_newton_iter = 15;
  JacobianMode jacobian_mode = JacobianMode::Analytic;
};

struct StepStats {
  int newton_iterations = 0;
  double final_residual = 0.0;          // scaled norm at acceptance
  double residual_ratio = 0.0;          // last norm / previous norm
  std::vector<double> residual_history; // scaled norms, initial guess first
  bool shortened = false;               // final step trimmed to hit t_end
};

class SolverError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
  long step_index = -1;
};

class NewtonDiverged : public SolverError {
public:
  NewtonDiverged(const std::string& what, std::vector<double> history)
      : SolverError(what), residual_history(std::move(history)) {}
  std::vector<double> residual_history;
};

class LinearSolveFailed : public SolverError {
public:
  using SolverError::SolverError;
};

struct NewtonResult {
  Eigen::VectorXd x;
  std::vector<double> residual_history;
  int iterations = 0;
};

// Damping-free Newton iteration on R(x) = 0. Convergence is declared when
// ||R(x)|| / norm_scale <= tol; throws NewtonDiverged otherwise.
NewtonResult newton_solve(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& residual,
    const std::function<SparseMat(const Eigen::VectorXd&)>& jacobian,
    const Eigen::VectorXd& x0, double tol, int max_iter, double norm_scale = 1.0);

// Block-diagonal mass matrix diag(Mv, MS, MF) of the stacked state.
SparseMat block_diag_mass(const ConstantOperators& ops);

// Residual and Jacobian of the midpoint stage equation
//   R(x+) = M (x+ - x_n) - dt * rhs((x_n + x+)/2, t_n + dt/2)
// with x = (v, S, F) stacked. Exposed for consistency checks.
Eigen::VectorXd midpoint_stage_residual(const PHSystem& system, const SparseMat& M,
                                        const Eigen::VectorXd& x_new, const State& base,
                                        double dt);
SparseMat midpoint_stage_matrix(const PHSystem& system, const SparseMat& M,
                                const Eigen::VectorXd& x_new, const State& base, double dt);

// One implicit midpoint step, solved with Newton's method; advances the
// displacement by dt * v_mid. The stepper owns the factorization
// workspace; for frozen-linear systems the stage matrix is constant per
// dt and factorized once.
class MidpointStepper {
public:
  MidpointStepper(const PHSystem& system, const IntegratorConfig& config);

  State step(const State& state, double dt);
  State step(const State& state) { return step(state, config_.dt); }
  const StepStats& last_stats() const { return stats_; }

private:
  const PHSystem& system_;
  IntegratorConfig config_;
  StepStats stats_;
  SparseMat M_;  // block-diagonal mass
  Eigen::SparseLU<SparseMat> lu_;
  bool factorized_ = false;
  double factorized_dt_ = 0.0;
};

State step_midpoint(const PHSystem& system, const State& state, double dt,
                    const IntegratorConfig& config, StepStats* stats = nullptr);

// Per-step record of a completed simulation.
struct Trajectory {
  std::vector<double> t, H, power_in, balance_residual;
  std::vector<Eigen::VectorXd> yN, yD;
  std::vector<int> newton_iterations;
  std::vector<double> final_residual, residual_ratio;

  int steps() const { return static_cast<int>(t.size()) - 1; }
};

using StepCallback = std::function<void(const State&, const StepStats&)>;

// Run from `init` to t_end. A non-divisible horizon is finished with one
// shortened step (flagged in the stats). Solver failures carry the index
// of the failing step.
Trajectory run(const PHSystem& system, const State& init, const IntegratorConfig& config,
               const StepCallback& on_step = nullptr);

}  // namespace phfem

#endif
