#pragma once

#include <vector>

#include "dpadmm/block_vector.hpp"
#include "dpadmm/problem.hpp"
#include "dpadmm/static_admm.hpp"

namespace dpadmm {

enum class SolveStatus { Success, BudgetExceeded };

const char* to_string(SolveStatus status);

struct CycleSummary {
  double c = 0.0;
  int iterations = 0;
  CycleStatus status = CycleStatus::BudgetExceeded;
  double p0_norm = 0.0;  ///< ||p-bar^{l-1}|| at the cycle start
};

struct SolveResult {
  SolveStatus status = SolveStatus::BudgetExceeded;
  BlockVector z_bar;
  Vector p_bar;
  Vector q_bar;
  BlockVector v_bar;
  double v_norm = 0.0;
  double feas_norm = 0.0;
  std::vector<CycleSummary> cycles;
  long total_iterations = 0;
  /// Full per-cycle output including telemetry, in cycle order.
  std::vector<CycleResult> cycle_results;
};

/// Penalty-doubling driver: warm-started static cycles with c_{l+1} = 2 c_l,
/// starting from p-bar^0 = 0.
SolveResult run(const BlockProblem& problem, const BlockVector& z0, const SolverParams& params);

}  // namespace dpadmm
