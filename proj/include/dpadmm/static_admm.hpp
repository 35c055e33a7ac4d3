#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dpadmm/block_vector.hpp"
#include "dpadmm/problem.hpp"

namespace dpadmm {

enum class CycleStatus { Success, PenaltyTooSmall, BudgetExceeded };

const char* to_string(CycleStatus status);

/// Per-iteration telemetry of a static cycle. Value-based fields are NaN when
/// the problem has no value oracles.
struct IterationRecord {
  int k = 0;
  double v_norm = 0.0;
  double f_norm = 0.0;          ///< ||A x^k - d||
  double p_norm = 0.0;          ///< ||p^k||
  double dp_norm = 0.0;         ///< ||p^k - p^{k-1}||
  double dx_sq = 0.0;           ///< ||x^k - x^{k-1}||^2
  double sum_A_dx_sq = 0.0;     ///< sum_t ||A_t (x_t^k - x_t^{k-1})||^2
  double recurrence_gap = 0.0;  ///< ||f^k - [p^k - (1-theta) p^{k-1}] / (chi c)||
  double dal_new = 0.0;         ///< L(x^k; p^k)
  double dal_mixed = 0.0;       ///< L(x^k; p^{k-1})
  double dal_old = 0.0;         ///< L(x^{k-1}; p^{k-1})
  double phi = 0.0;             ///< phi(x^k)
  double psi = 0.0;             ///< potential Psi_k(c)
  double inner_residual = 0.0;  ///< max_t ||r_t^k|| over the sweep
  int inner_iterations = 0;
  bool exact = true;            ///< every block solved exactly this iteration
};

/// Optional vector history: p[0] = p^0, p[i] = p^i, f[i-1] = A x^i - d.
struct CycleTrace {
  std::vector<Vector> p;
  std::vector<Vector> f;
};

/// Running state of Algorithm "static cycle".
struct CycleState {
  int k = 0;
  BlockVector x;
  BlockVector x_prev;
  Vector p;
  Vector p_prev;
  Vector q;
  BlockVector v;
  Vector f_res;
  std::vector<double> v_norm_hist;  ///< ||v^i||, i = 1..k
  std::vector<double> f_norm_hist;  ///< ||A x^i - d||
  std::vector<double> p_norm_hist;
  // Prefix sums: prefix[i] = sum_{j <= i} hist[j-1], prefix[0] = 0.
  std::vector<double> v_prefix{0.0};
  std::vector<double> f_prefix{0.0};

  void push_norms(double v_norm, double f_norm);
};

struct CycleResult {
  CycleStatus status = CycleStatus::BudgetExceeded;
  BlockVector x_out;
  Vector p_out;
  Vector q_out;
  BlockVector v_out;
  int iterations = 0;
  double v_norm = 0.0;
  double feas_norm = 0.0;

  double c = 0.0;
  double theta = 0.0;
  double chi = 0.0;
  double lambda = 0.0;
  double p0_norm = 0.0;

  std::vector<IterationRecord> telemetry;
  std::optional<CycleTrace> trace;
  std::vector<std::string> warnings;
};

struct SweepStats {
  double max_inner_residual = 0.0;
  int inner_iterations = 0;
  bool exact = true;
};

/// Step 1: Gauss-Seidel prox update of every block. Moves state.x into
/// state.x_prev and leaves x^k in state.x; reads p^{k-1} from state.p.
SweepStats prox_sweep(const BlockProblem& problem, CycleState& state, double c, const SolverParams& params);

/// q = (1 - theta) p_prev + c f_res
Vector compute_q(const Vector& p_prev, double c, double theta, const Vector& f_res);

/// Step 2a residual v^k, block by block.
BlockVector compute_v(const BlockProblem& problem, const BlockVector& x_new, const BlockVector& x_prev, double c,
                      double lambda);

/// (v_norm <= rho) and (feas_norm <= eta)
bool success_check(double v_norm, double feas_norm, double rho, double eta);

/// The averaged residuals S_k^(v), S_k^(f) of the Step 2b test.
struct WindowAverages {
  double v = 0.0;
  double f = 0.0;
};

/// True when Step 2b is evaluated at iteration k (k even and k >= 4).
bool failure_check_due(int k);

/// 2/(k+2) times the window sum of each history; histories are indexed
/// hist[i-1] = value at iteration i.
WindowAverages window_averages(int k, std::span<const double> v_hist, std::span<const double> f_hist, WindowMode mode);

/// S^(v)/rho + sqrt(c^3/k) S^(f)/eta <= 1
bool failure_test(int k, const WindowAverages& avg, double c, double rho, double eta);

/// Step 2b on full histories.
bool failure_check(int k, std::span<const double> v_hist, std::span<const double> f_hist, double c, double rho,
                   double eta, WindowMode mode);

/// p = (1 - theta) p_prev + chi c f_res
Vector update_p(const Vector& p_prev, double c, double theta, double chi, const Vector& f_res);

/// Runs one static cycle at fixed penalty c. `max_iters` caps the cycle below
/// params.max_cycle_iters when positive.
CycleResult run_static_cycle(const BlockProblem& problem, const BlockVector& x0, const Vector& p0, double c,
                             const SolverParams& params, int max_iters = 0);

}  // namespace dpadmm
