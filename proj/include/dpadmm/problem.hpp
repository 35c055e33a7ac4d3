#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dpadmm/block_vector.hpp"
#include "dpadmm/linear_operator.hpp"

namespace dpadmm {

struct BlockSubproblem;

/// Raised when a value oracle needed by a diagnostic is absent.
class MissingOracleError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Gradient of f(x_{<t}, ., x_{>t}) at u; block t of x is ignored.
using BlockGradient = std::function<Vector(int t, const BlockVector& x, const Vector& u)>;
/// Value of the smooth part f.
using SmoothValue = std::function<double(const BlockVector& x)>;
/// Value of h_t (may be +infinity off its domain).
using BlockValue = std::function<double(int t, const Vector& u)>;
/// prox_{tau h_t}(v).
using BlockProx = std::function<Vector(int t, const Vector& v, double tau)>;
/// Exact minimizer of a Step 1 subproblem, when the problem offers one.
using BlockExactSolver = std::function<Vector(const BlockSubproblem& sub)>;

/// Scalars attached to a Slater point z_dagger of the feasible set, used only by
/// the diagnostics layer.
struct SlaterData {
  BlockVector z_dagger;
  double d_dagger = 0.0;       ///< dist(z_dagger, boundary of dom h)
  double D_dagger = 0.0;       ///< sup_{z in dom h} ||z - z_dagger||
  double G_f = 0.0;            ///< sup ||grad f|| over dom h
  double K_h = 0.0;            ///< Lipschitz constant of h on dom h
  double phi_lo = 0.0;         ///< inf of phi over dom h
  double phi_hi = 0.0;         ///< sup of phi over dom h
  double norm_A = 0.0;         ///< ||A||
  double sigma_A_plus = 0.0;   ///< smallest positive singular value of A
  double norm_A_dagger = 0.0;  ///< sum_t ||A_t||
};

/// min f(x) + sum_t h_t(x_t)  s.t.  sum_t A_t x_t = d.
struct BlockProblem {
  BlockStructure structure;
  BlockGradient grad_block;
  SmoothValue phi_smooth;   // optional
  BlockValue h_value;       // optional
  BlockProx prox_h;         // needed by the inexact inner solver
  BlockExactSolver prox_block;  // optional exact Step 1 solver
  BlockOperator A;
  Vector d;
  std::vector<double> m;  ///< weak-convexity constants m_t
  std::vector<double> M;  ///< cross-block Lipschitz constants M_1..M_{B-1}
  std::optional<SlaterData> slater;

  int num_blocks() const { return structure.num_blocks(); }
  bool has_values() const { return static_cast<bool>(phi_smooth) && static_cast<bool>(h_value); }
  bool has_exact_solver() const { return static_cast<bool>(prox_block); }
  double max_m() const;
  double max_M() const;

  /// Checks dimensions, d in Im(A) and (if present) A z_dagger = d. Throws
  /// DimensionError or std::invalid_argument on failure.
  void validate(double image_tol = 1e-10) const;
};

/// Tolerance-gated test that d lies in Im(A), via matrix-free CGLS.
/// Returns the least-squares residual ||A x_ls - d||.
double least_squares_residual(const BlockOperator& A, const Vector& d, BlockVector* solution = nullptr);

/// phi(x) = f(x) + sum_t h_t(x_t).
double eval_phi(const BlockProblem& problem, const BlockVector& x);

/// Dampened augmented Lagrangian phi(x) + (1-theta)<p, Ax-d> + (c/2)||Ax-d||^2.
double eval_dal(const BlockProblem& problem, const BlockVector& x, const Vector& p, double c, double theta);

/// Ax - d.
Vector constraint_residual(const BlockProblem& problem, const BlockVector& x);

enum class WindowMode { HalfWindow, FullAverage };

const char* to_string(WindowMode mode);
WindowMode window_mode_from_string(const std::string& name);

struct InexactCriterion {
  double sigma = 0.1;
  int max_inner = 100000;
};

struct SolverParams {
  double lambda = 0.5;
  double theta = 0.5;
  double chi = 1.0 / 18.0;
  double c1 = 1.0;
  double rho = 1e-9;
  double eta = 1e-9;
  int max_cycle_iters = 100000;
  int max_outer_cycles = 60;
  /// Cap on iterations summed over all cycles; 0 means no cap.
  long max_total_iters = 0;
  WindowMode window_mode = WindowMode::FullAverage;
  bool strict_params = true;
  /// Skip the penalty-too-small test entirely (classic fixed-penalty ADMM).
  bool disable_failure_check = false;
  /// Use the inexact inner solver even when an exact one exists.
  bool force_inexact = false;
  InexactCriterion inner;
  /// Keep p^i and f^i vectors in the telemetry for the lemma suite.
  bool trace_vectors = false;
};

struct ParamIssue {
  std::string field;
  std::string message;
};

struct ValidationReport {
  std::vector<ParamIssue> errors;
  std::vector<ParamIssue> warnings;

  bool ok() const { return errors.empty(); }
  std::string summary() const;
};

/// Left-hand side 2 chi B (2 - theta)(1 - theta) of the (chi, theta) coupling condition.
double chi_theta_lhs(double chi, double theta, int num_blocks);
/// True when 2 chi B (2 - theta)(1 - theta) <= theta^2.
bool chi_theta_condition_holds(double chi, double theta, int num_blocks);
/// Largest admissible chi for the given theta: theta^2 / [2B(2-theta)(1-theta)], or 1 at theta = 1.
double max_admissible_chi(double theta, int num_blocks);

/// Checks the stepsize range lambda in (0, 1/(2m)] and the (chi, theta) condition.
/// Without strict_params, a violated (chi, theta) condition is only a warning.
ValidationReport validate_params(const SolverParams& params, int num_blocks, double max_m);

}  // namespace dpadmm
