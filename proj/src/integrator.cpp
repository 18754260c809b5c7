#include "phfem/integrator.hpp"

#include <cmath>

namespace phfem {

NewtonResult newton_solve(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& residual,
    const std::function<SparseMat(const Eigen::VectorXd&)>& jacobian,
    const Eigen::VectorXd& x0, double tol, int max_iter, double norm_scale) {
  if (tol <= 0.0 || max_iter < 1 || norm_scale <= 0.0)
    throw std::invalid_argument("newton_solve: invalid tolerance settings");

  NewtonResult result;
  result.x = x0;
  Eigen::VectorXd R = residual(result.x);
  result.residual_history.push_back(R.norm() / norm_scale);

  Eigen::SparseLU<SparseMat> lu;
  while (result.residual_history.back() > tol) {
    if (result.iterations >= max_iter) {
      NewtonDiverged err("Newton did not converge within " + std::to_string(max_iter) +
                             " iterations (residual " +
                             std::to_string(result.residual_history.back()) + ")",
                         result.residual_history);
      throw err;
    }
    lu.compute(jacobian(result.x));
    if (lu.info() != Eigen::Success)
      throw LinearSolveFailed("stage matrix factorization failed");
    result.x -= lu.solve(R);
    ++result.iterations;
    R = residual(result.x);
    result.residual_history.push_back(R.norm() / norm_scale);
  }
  return result;
}

SparseMat block_diag_mass(const ConstantOperators& ops) {
  const int nv = static_cast<int>(ops.Mv.rows());
  const int nS = static_cast<int>(ops.MS.rows());
  const int nF = static_cast<int>(ops.MF.rows());
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(ops.Mv.nonZeros() + ops.MS.nonZeros() + ops.MF.nonZeros());
  auto push = [&t](const SparseMat& A, int off) {
    for (int k = 0; k < A.outerSize(); ++k)
      for (SparseMat::InnerIterator it(A, k); it; ++it)
        t.emplace_back(off + static_cast<int>(it.row()), off + static_cast<int>(it.col()),
                       it.value());
  };
  push(ops.Mv, 0);
  push(ops.MS, nv);
  push(ops.MF, nv + nS);
  SparseMat M(nv + nS + nF, nv + nS + nF);
  M.setFromTriplets(t.begin(), t.end());
  return M;
}

namespace {

void append_block(std::vector<Eigen::Triplet<double>>& t, const SparseMat& A, int row_off,
                  int col_off, double scale) {
  for (int k = 0; k < A.outerSize(); ++k)
    for (SparseMat::InnerIterator it(A, k); it; ++it)
      t.emplace_back(row_off + static_cast<int>(it.row()), col_off + static_cast<int>(it.col()),
                     scale * it.value());
}

void append_block_transposed(std::vector<Eigen::Triplet<double>>& t, const SparseMat& A,
                             int row_off, int col_off, double scale) {
  for (int k = 0; k < A.outerSize(); ++k)
    for (SparseMat::InnerIterator it(A, k); it; ++it)
      t.emplace_back(row_off + static_cast<int>(it.col()), col_off + static_cast<int>(it.row()),
                     scale * it.value());
}

}  // namespace

MidpointStepper::MidpointStepper(const PHSystem& system, const IntegratorConfig& config)
    : system_(system), config_(config) {
  if (config_.newton_tol <= 0.0) throw std::invalid_argument("newton_tol must be positive");
  if (config_.max_newton_iter < 1) throw std::invalid_argument("max_newton_iter must be >= 1");
  M_ = block_diag_mass(system_.ops());
}

Eigen::VectorXd midpoint_stage_residual(const PHSystem& system, const SparseMat& M,
                                        const Eigen::VectorXd& x_new, const State& base,
                                        double dt) {
  const int nv = system.n_v(), nS = system.n_S(), nF = system.n_F();
  const double t_mid = base.t + 0.5 * dt;
  State mid;
  mid.v = 0.5 * (base.v + x_new.segment(0, nv));
  mid.S = 0.5 * (base.S + x_new.segment(nv, nS));
  mid.F = 0.5 * (base.F + x_new.segment(nv + nS, nF));
  Eigen::VectorXd x_old(system.n());
  x_old << base.v, base.S, base.F;
  return M * (x_new - x_old) - dt * system.rhs(mid, t_mid);
}

SparseMat midpoint_stage_matrix(const PHSystem& system, const SparseMat& M,
                                const Eigen::VectorXd& x_new, const State& base, double dt) {
  const int nv = system.n_v(), nS = system.n_S(), nF = system.n_F();
  const double t_mid = base.t + 0.5 * dt;
  const Eigen::VectorXd v_mid = 0.5 * (base.v + x_new.segment(0, nv));
  const Eigen::VectorXd S_mid = 0.5 * (base.S + x_new.segment(nv, nS));
  const Eigen::VectorXd F_mid = 0.5 * (base.F + x_new.segment(nv + nS, nF));

  const SparseMat K = system.K_at(F_mid);
  const JacobianBlocks blocks = system.jacobian_blocks(S_mid, v_mid, t_mid);
  const double h = 0.5 * dt;

  std::vector<Eigen::Triplet<double>> t;
  t.reserve(M.nonZeros() + 2 * K.nonZeros() + system.ops().Z.nonZeros() +
            blocks.dKS_dF.nonZeros() + blocks.dKtV_dF.nonZeros() + blocks.dGnuNu_dF.nonZeros());
  append_block(t, M, 0, 0, 1.0);
  append_block(t, K, 0, nv, h);
  append_block_transposed(t, K, nv, 0, -h);
  if (!system.frozen()) {
    append_block(t, blocks.dKS_dF, 0, nv + nS, h);
    append_block(t, blocks.dKtV_dF, nv, nv + nS, -h);
    append_block(t, blocks.dGnuNu_dF, nv, nv + nS, -h);
    append_block(t, system.ops().Z, nv + nS, 0, -h);
  }
  SparseMat J(system.n(), system.n());
  J.setFromTriplets(t.begin(), t.end());
  return J;
}

State MidpointStepper::step(const State& state, double dt) {
  const int nv = system_.n_v(), nS = system_.n_S(), nF = system_.n_F();

  Eigen::VectorXd x(system_.n());
  x << state.v, state.S, state.F;  // initial guess: previous state
  const double norm_scale = std::max(1.0, (M_ * x).norm());

  stats_ = StepStats{};
  Eigen::VectorXd R = midpoint_stage_residual(system_, M_, x, state, dt);
  stats_.residual_history.push_back(R.norm() / norm_scale);

  Eigen::PartialPivLU<Eigen::MatrixXd> dense_lu;  // finite-difference mode only

  while (stats_.residual_history.back() > config_.newton_tol) {
    if (stats_.newton_iterations >= config_.max_newton_iter) {
      NewtonDiverged err("midpoint stage solve did not converge (residual " +
                             std::to_string(stats_.residual_history.back()) + ")",
                         stats_.residual_history);
      throw err;
    }

    if (config_.jacobian_mode == JacobianMode::Analytic) {
      // The frozen-linear stage matrix is state independent: factorize it
      // once per step size and reuse across steps.
      const bool reuse = system_.frozen() && factorized_ && factorized_dt_ == dt;
      if (!reuse) {
        lu_.compute(midpoint_stage_matrix(system_, M_, x, state, dt));
        if (lu_.info() != Eigen::Success)
          throw LinearSolveFailed("stage matrix factorization failed");
        factorized_ = system_.frozen();
        factorized_dt_ = dt;
      }
      x -= lu_.solve(R);
    } else {
      const double eps = 1e-6;
      Eigen::MatrixXd Jd(system_.n(), system_.n());
      Eigen::VectorXd xp = x;
      for (int j = 0; j < system_.n(); ++j) {
        const double save = xp(j);
        xp(j) = save + eps;
        const Eigen::VectorXd Rp = midpoint_stage_residual(system_, M_, xp, state, dt);
        xp(j) = save - eps;
        const Eigen::VectorXd Rm = midpoint_stage_residual(system_, M_, xp, state, dt);
        xp(j) = save;
        Jd.col(j) = (Rp - Rm) / (2.0 * eps);
      }
      dense_lu.compute(Jd);
      x -= dense_lu.solve(R);
    }

    ++stats_.newton_iterations;
    R = midpoint_stage_residual(system_, M_, x, state, dt);
    stats_.residual_history.push_back(R.norm() / norm_scale);
  }

  stats_.final_residual = stats_.residual_history.back();
  const auto& hist = stats_.residual_history;
  stats_.residual_ratio =
      hist.size() >= 2 ? hist.back() / std::max(hist[hist.size() - 2], 1e-300) : 0.0;

  State next;
  next.v = x.segment(0, nv);
  next.S = x.segment(nv, nS);
  next.F = x.segment(nv + nS, nF);
  next.u = state.u + dt * 0.5 * (state.v + next.v);
  next.t = state.t + dt;
  return next;
}

State step_midpoint(const PHSystem& system, const State& state, double dt,
                    const IntegratorConfig& config, StepStats* stats) {
  MidpointStepper stepper(system, config);
  State next = stepper.step(state, dt);
  if (stats) *stats = stepper.last_stats();
  return next;
}

Trajectory run(const PHSystem& system, const State& init, const IntegratorConfig& config,
               const StepCallback& on_step) {
  if (config.dt <= 0.0) throw std::invalid_argument("run: dt must be positive");
  if (config.t_end < 0.0) throw std::invalid_argument("run: t_end must be non-negative");

  MidpointStepper stepper(system, config);
  Trajectory traj;
  auto record = [&](const State& s, double power, double balance, const StepStats& st) {
    traj.t.push_back(s.t);
    traj.H.push_back(system.hamiltonian(s));
    traj.power_in.push_back(power);
    traj.balance_residual.push_back(balance);
    const PHSystem::Outputs y = system.outputs(s);
    traj.yN.push_back(y.yN);
    traj.yD.push_back(y.yD);
    traj.newton_iterations.push_back(st.newton_iterations);
    traj.final_residual.push_back(st.final_residual);
    traj.residual_ratio.push_back(st.residual_ratio);
  };
  record(init, 0.0, 0.0, StepStats{});

  const double span = config.t_end - init.t;
  long n_full = static_cast<long>(std::floor(span / config.dt + 1e-9));
  double remainder = span - static_cast<double>(n_full) * config.dt;
  if (remainder <= 1e-9 * config.dt) remainder = 0.0;

  State state = init;
  const long total = n_full + (remainder > 0.0 ? 1 : 0);
  for (long k = 0; k < total; ++k) {
    const double dt = (k < n_full) ? config.dt : remainder;
    try {
      State next = stepper.step(state, dt);
      StepStats st = stepper.last_stats();
      st.shortened = k >= n_full;
      const double power = system.midpoint_power(state, next, dt);
      const double balance = system.power_balance_residual(state, next, dt);
      record(next, power, balance, st);
      if (on_step) on_step(next, st);
      state = std::move(next);
    } catch (SolverError& err) {
      err.step_index = k;
      throw;
    }
  }
  return traj;
}

}  // namespace phfem
