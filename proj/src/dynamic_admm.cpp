#include "dpadmm/dynamic_admm.hpp"

#include <algorithm>
#include <limits>

namespace dpadmm {

const char* to_string(SolveStatus status) {
  return status == SolveStatus::Success ? "SUCCESS" : "BUDGET_EXCEEDED";
}

SolveResult run(const BlockProblem& problem, const BlockVector& z0, const SolverParams& params) {
  z0.require_matches(problem.structure, "run z0");

  SolveResult out;
  BlockVector z = z0;
  Vector p = Vector::Zero(problem.structure.constraint_dim);
  double c = params.c1;

  for (int cycle = 1; cycle <= params.max_outer_cycles; ++cycle) {
    int cap = params.max_cycle_iters;
    if (params.max_total_iters > 0) {
      const long remaining = params.max_total_iters - out.total_iterations;
      if (remaining <= 0) break;
      cap = static_cast<int>(std::min<long>(cap, remaining));
    }

    CycleResult res = run_static_cycle(problem, z, p, c, params, cap);
    out.total_iterations += res.iterations;
    out.cycles.push_back({c, res.iterations, res.status, res.p0_norm});

    z = res.x_out;
    p = res.p_out;
    out.z_bar = res.x_out;
    out.p_bar = res.p_out;
    out.q_bar = res.q_out;
    out.v_bar = res.v_out;
    out.v_norm = res.v_norm;
    out.feas_norm = res.feas_norm;
    const bool solved = success_check(res.v_norm, res.feas_norm, params.rho, params.eta);
    out.cycle_results.push_back(std::move(res));
    if (solved) {
      out.status = SolveStatus::Success;
      return out;
    }
    // A cycle that hit its iteration cap is treated like a penalty-too-small signal.
    c *= 2.0;
  }
  out.status = SolveStatus::BudgetExceeded;
  return out;
}

}  // namespace dpadmm
