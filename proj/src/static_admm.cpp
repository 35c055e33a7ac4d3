#include "dpadmm/static_admm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dpadmm/diagnostics.hpp"
#include "dpadmm/inner_solvers.hpp"

namespace dpadmm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

const char* to_string(CycleStatus status) {
  switch (status) {
    case CycleStatus::Success:
      return "SUCCESS";
    case CycleStatus::PenaltyTooSmall:
      return "PENALTY_TOO_SMALL";
    case CycleStatus::BudgetExceeded:
      return "BUDGET_EXCEEDED";
  }
  return "UNKNOWN";
}

void CycleState::push_norms(double v_norm, double f_norm) {
  v_norm_hist.push_back(v_norm);
  f_norm_hist.push_back(f_norm);
  v_prefix.push_back(v_prefix.back() + v_norm);
  f_prefix.push_back(f_prefix.back() + f_norm);
}

SweepStats prox_sweep(const BlockProblem& problem, CycleState& state, double c, const SolverParams& params) {
  const int B = problem.num_blocks();
  state.x_prev = state.x;
  const Vector dual_shift = (1.0 - params.theta) * state.p;
  Vector running = constraint_residual(problem, state.x);

  SweepStats stats;
  for (int t = 0; t < B; ++t) {
    const LinearOperator& A_t = problem.A.block(t);
    BlockSubproblem sub;
    sub.t = t;
    sub.lambda = params.lambda;
    sub.c = c;
    sub.m_t = problem.m[static_cast<std::size_t>(t)];
    sub.center = state.x_prev[t];
    sub.residual_base = running;
    sub.residual_base.noalias() -= A_t.apply(state.x[t]);
    sub.dual_shift = dual_shift;
    sub.A_t = &A_t;
    // state.x holds x^k on blocks < t and x^{k-1} on blocks >= t.
    const BlockVector& mixed = state.x;
    sub.grad_f = [&problem, &mixed, t](const Vector& u) { return problem.grad_block(t, mixed, u); };
    if (problem.phi_smooth) {
      sub.value_f = [&problem, &mixed, t](const Vector& u) {
        BlockVector y = mixed;
        y[t] = u;
        return problem.phi_smooth(y);
      };
    }
    if (problem.prox_h) {
      sub.prox_h = [&problem, t](const Vector& v, double tau) { return problem.prox_h(t, v, tau); };
    }
    if (problem.h_value) {
      sub.h_value = [&problem, t](const Vector& u) { return problem.h_value(t, u); };
    }

    SubproblemSolution sol = solve_subproblem(problem, sub, params);
    if (sol.u.size() != sub.center.size()) throw DimensionError("block solver returned a vector of the wrong length");
    stats.max_inner_residual = std::max(stats.max_inner_residual, sol.residual_norm);
    stats.inner_iterations += sol.inner_iterations;
    stats.exact = stats.exact && (sol.exact || sol.residual_norm == 0.0);

    running = std::move(sub.residual_base);
    A_t.apply_add(sol.u, running);
    state.x[t] = std::move(sol.u);
  }
  return stats;
}

Vector compute_q(const Vector& p_prev, double c, double theta, const Vector& f_res) {
  return (1.0 - theta) * p_prev + c * f_res;
}

BlockVector compute_v(const BlockProblem& problem, const BlockVector& x_new, const BlockVector& x_prev, double c,
                      double lambda) {
  const int B = problem.num_blocks();
  std::vector<Vector> v(static_cast<std::size_t>(B));

  // delta_t = grad_t f(x^k) - grad_t f(x^k_{<=t}, x^{k-1}_{>t})
  BlockVector mixed = x_prev;
  for (int t = 0; t < B; ++t) {
    mixed[t] = x_new[t];
    v[static_cast<std::size_t>(t)] =
        problem.grad_block(t, x_new, x_new[t]) - problem.grad_block(t, mixed, x_new[t]);
  }

  // c A_t^* sum_{s>t} A_s dx_s - dx_t / lambda
  Vector tail = Vector::Zero(problem.A.rows());
  for (int t = B - 1; t >= 0; --t) {
    const LinearOperator& A_t = problem.A.block(t);
    const Vector dx = x_new[t] - x_prev[t];
    auto& vt = v[static_cast<std::size_t>(t)];
    vt += c * A_t.adjoint(tail) - dx / lambda;
    A_t.apply_add(dx, tail);
  }
  return BlockVector(std::move(v));
}

bool success_check(double v_norm, double feas_norm, double rho, double eta) {
  return v_norm <= rho && feas_norm <= eta;
}

bool failure_check_due(int k) { return k % 2 == 0 && k >= 3; }

WindowAverages window_averages(int k, std::span<const double> v_hist, std::span<const double> f_hist,
                               WindowMode mode) {
  if (k < 1 || static_cast<std::size_t>(k) > v_hist.size() || static_cast<std::size_t>(k) > f_hist.size()) {
    throw std::out_of_range("window_averages: history shorter than k");
  }
  const int first = mode == WindowMode::HalfWindow ? k / 2 : 1;
  double sv = 0.0;
  double sf = 0.0;
  for (int i = std::max(first, 1); i <= k; ++i) {
    sv += v_hist[static_cast<std::size_t>(i - 1)];
    sf += f_hist[static_cast<std::size_t>(i - 1)];
  }
  const double scale = 2.0 / (k + 2.0);
  return {scale * sv, scale * sf};
}

bool failure_test(int k, const WindowAverages& avg, double c, double rho, double eta) {
  return avg.v / rho + std::sqrt(c * c * c / k) * avg.f / eta <= 1.0;
}

bool failure_check(int k, std::span<const double> v_hist, std::span<const double> f_hist, double c, double rho,
                   double eta, WindowMode mode) {
  return failure_test(k, window_averages(k, v_hist, f_hist, mode), c, rho, eta);
}

Vector update_p(const Vector& p_prev, double c, double theta, double chi, const Vector& f_res) {
  return (1.0 - theta) * p_prev + chi * c * f_res;
}

namespace {

WindowAverages running_averages(const CycleState& state, int k, WindowMode mode) {
  const int first = mode == WindowMode::HalfWindow ? k / 2 : 1;
  const auto lo = static_cast<std::size_t>(first - 1);
  const auto hi = static_cast<std::size_t>(k);
  const double scale = 2.0 / (k + 2.0);
  return {scale * (state.v_prefix[hi] - state.v_prefix[lo]), scale * (state.f_prefix[hi] - state.f_prefix[lo])};
}

bool in_domain(const BlockProblem& problem, const BlockVector& x) {
  if (!problem.h_value) return true;
  for (int t = 0; t < x.num_blocks(); ++t) {
    if (!std::isfinite(problem.h_value(t, x[t]))) return false;
  }
  return true;
}

}  // namespace

CycleResult run_static_cycle(const BlockProblem& problem, const BlockVector& x0, const Vector& p0, double c,
                             const SolverParams& params, int max_iters) {
  x0.require_matches(problem.structure, "run_static_cycle x0");
  if (p0.size() != problem.structure.constraint_dim) throw DimensionError("p0 must have length ell");
  if (!(c > 0.0)) throw std::invalid_argument("penalty parameter c must be positive");

  CycleResult result;
  result.c = c;
  result.theta = params.theta;
  result.chi = params.chi;
  result.lambda = params.lambda;
  result.p0_norm = p0.norm();

  if (!in_domain(problem, x0)) result.warnings.emplace_back("x0 is outside dom h");
  if (result.p0_norm > 0.0 && problem.structure.total_dim() <= 4096) {
    if (least_squares_residual(problem.A, p0) > 1e-8 * (1.0 + result.p0_norm)) {
      result.warnings.emplace_back("p0 is not in the image of A");
    }
  }

  const int cap = max_iters > 0 ? std::min(max_iters, params.max_cycle_iters) : params.max_cycle_iters;
  const int B = problem.num_blocks();
  const bool values = problem.has_values();
  const DampeningConstants consts = dampening_constants(params.theta, params.chi, B);
  const double psi_p_coef = consts.a_theta / (2.0 * params.chi * c);
  const double psi_dp_coef = consts.gamma_theta / (4.0 * B * params.chi * c);

  CycleState state;
  state.x = x0;
  state.p = p0;
  state.v_norm_hist.reserve(static_cast<std::size_t>(std::min(cap, 4096)));

  if (params.trace_vectors) {
    result.trace.emplace();
    result.trace->p.push_back(p0);
  }

  double dal_carry = values ? eval_dal(problem, state.x, state.p, c, params.theta) : kNaN;

  for (int k = 1; k <= cap; ++k) {
    state.k = k;
    const SweepStats sweep = prox_sweep(problem, state, c, params);

    state.f_res = constraint_residual(problem, state.x);
    state.q = compute_q(state.p, c, params.theta, state.f_res);
    state.v = compute_v(problem, state.x, state.x_prev, c, params.lambda);
    const double v_norm = state.v.norm();
    const double f_norm = state.f_res.norm();
    state.push_norms(v_norm, f_norm);

    CycleStatus status = CycleStatus::BudgetExceeded;
    bool stop = false;
    if (success_check(v_norm, f_norm, params.rho, params.eta)) {
      status = CycleStatus::Success;
      stop = true;
    } else if (!params.disable_failure_check && failure_check_due(k) &&
               failure_test(k, running_averages(state, k, params.window_mode), c, params.rho, params.eta)) {
      status = CycleStatus::PenaltyTooSmall;
      stop = true;
    }

    // Step 3. Also applied on the terminating iteration so the returned
    // multiplier obeys the same recurrence as every earlier one.
    state.p_prev = std::move(state.p);
    state.p = update_p(state.p_prev, c, params.theta, params.chi, state.f_res);
    state.p_norm_hist.push_back(state.p.norm());

    IterationRecord rec;
    rec.k = k;
    rec.v_norm = v_norm;
    rec.f_norm = f_norm;
    rec.p_norm = state.p_norm_hist.back();
    rec.dp_norm = (state.p - state.p_prev).norm();
    rec.inner_residual = sweep.max_inner_residual;
    rec.inner_iterations = sweep.inner_iterations;
    rec.exact = sweep.exact;
    rec.recurrence_gap =
        (state.f_res - (state.p - (1.0 - params.theta) * state.p_prev) / (params.chi * c)).norm();
    double dx_sq = 0.0;
    double a_dx_sq = 0.0;
    for (int t = 0; t < B; ++t) {
      const Vector dx = state.x[t] - state.x_prev[t];
      dx_sq += dx.squaredNorm();
      a_dx_sq += problem.A.block(t).apply(dx).squaredNorm();
    }
    rec.dx_sq = dx_sq;
    rec.sum_A_dx_sq = a_dx_sq;
    if (values) {
      rec.dal_old = dal_carry;
      rec.phi = eval_phi(problem, state.x);
      const double lin_old = state.p_prev.dot(state.f_res);
      const double lin_new = state.p.dot(state.f_res);
      const double quad = 0.5 * c * f_norm * f_norm;
      rec.dal_mixed = rec.phi + (1.0 - params.theta) * lin_old + quad;
      rec.dal_new = rec.phi + (1.0 - params.theta) * lin_new + quad;
      rec.psi = rec.dal_new - psi_p_coef * rec.p_norm * rec.p_norm + psi_dp_coef * rec.dp_norm * rec.dp_norm;
      dal_carry = rec.dal_new;
    } else {
      rec.dal_old = rec.dal_mixed = rec.dal_new = rec.phi = rec.psi = kNaN;
    }
    result.telemetry.push_back(rec);
    if (result.trace) {
      result.trace->p.push_back(state.p);
      result.trace->f.push_back(state.f_res);
    }

    if (stop || k == cap) {
      result.status = status;
      break;
    }
  }

  result.x_out = std::move(state.x);
  result.p_out = std::move(state.p);
  result.q_out = std::move(state.q);
  result.v_out = std::move(state.v);
  result.iterations = state.k;
  result.v_norm = state.v_norm_hist.empty() ? 0.0 : state.v_norm_hist.back();
  result.feas_norm = state.f_norm_hist.empty() ? 0.0 : state.f_norm_hist.back();
  return result;
}

}  // namespace dpadmm
