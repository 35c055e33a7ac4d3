#pragma once

#include <string>
#include <vector>

#include "dpadmm/block_vector.hpp"
#include "dpadmm/dynamic_admm.hpp"
#include "dpadmm/problem.hpp"
#include "dpadmm/static_admm.hpp"

namespace dpadmm {

/// a_theta = theta(1-theta), b_theta = (2-theta)(1-theta) and
/// gamma_theta = [(1 - 2 B chi b_theta) - (1-theta)^2] / (2 chi).
struct DampeningConstants {
  double a_theta = 0.0;
  double b_theta = 0.0;
  double gamma_theta = 0.0;
};

DampeningConstants dampening_constants(double theta, double chi, int num_blocks);

/// Every complexity constant for one problem and parameter set. Entries that
/// the theory leaves undefined (e.g. theta = 0) come out as +inf or NaN.
struct ConstantsReport {
  int B = 0;
  double lambda = 0.0;
  double theta = 0.0;
  double chi = 0.0;

  // Problem scalars.
  double M = 0.0;
  double m = 0.0;
  double Delta_phi = 0.0;
  double D_dagger = 0.0;
  double d_dagger = 0.0;
  double G_f = 0.0;
  double K_h = 0.0;
  double norm_A = 0.0;
  double sigma_A_plus = 0.0;
  double norm_A_dagger = 0.0;

  // Independent of (c, p0).
  double kappa0 = 0.0;
  double kappa1 = 0.0;
  double kappa2 = 0.0;
  double kappa3 = 0.0;
  double kappa4 = 0.0;
  double kappa5 = 0.0;
  double kappa6 = 0.0;
  double a_theta = 0.0;
  double b_theta = 0.0;
  double gamma_theta = 0.0;

  // Dependent on the penalty lower bound c_lower.
  double c_lower = 0.0;
  double kappa_tilde0 = 0.0;
  double kappa_tilde1 = 0.0;
  double kappa_tilde2 = 0.0;

  // Dependent on R >= ||p0|| / c.
  double R = 0.0;
  double xi0 = 0.0;
  double xi1 = 0.0;

  // Bounds at (c, rho, eta).
  double c = 0.0;
  double rho = 0.0;
  double eta = 0.0;
  double T_c = 0.0;
  double c_hat = 0.0;

  // Dynamic run bound with c_1 = params.c1.
  double T1 = 0.0;
  double E0 = 0.0;
  double E1 = 0.0;
  double dyn_bound = 0.0;
};

/// The (c, p0)-independent part of the report; everything else is derived
/// from it by the functions below.
ConstantsReport base_constants(const BlockProblem& problem, const SolverParams& params);

/// kappa-tilde^(0..2) for a penalty lower bound c_lower.
void fill_c_lower_constants(ConstantsReport& r, double c_lower);
/// xi^(0), xi^(1) for a multiplier-ratio bound R.
void fill_R_constants(ConstantsReport& r, double R);

/// Iteration bound T_c(rho, eta | c_lower, R) of a static cycle.
double static_iteration_bound(const ConstantsReport& base, double c, double rho, double eta, double c_lower,
                              double R);
/// Penalty threshold c-hat(rho, eta | c_lower, R) above which a static cycle must succeed.
double penalty_threshold(const ConstantsReport& base, double rho, double eta, double c_lower, double R);

/// Full report. Throws MissingOracleError when the problem has no Slater data.
ConstantsReport compute_constants(const BlockProblem& problem, const SolverParams& params, double c, double c_lower,
                                  double R);

/// ||a - (1-theta) b||^2 - zeta ||a||^2 - [((1-zeta) - (1-theta)^2)/2] (||a||^2 - ||b||^2),
/// nonnegative whenever zeta <= theta^2.
double multiplier_increment_gap(const Vector& a, const Vector& b, double theta, double zeta);

/// max_t ||x_t - prox_{tau h_t}(x_t - tau (grad_t f(x) + A_t^* q - v_t))||. Zero
/// exactly when v lies in grad f(x) + A^* q + dh(x).
double stationarity_certificate_residual(const BlockProblem& problem, const BlockVector& x, const Vector& q,
                                         const BlockVector& v, double tau = 1.0);

struct LemmaCheck {
  std::string name;
  bool applicable = true;
  bool has_warnings = false;  ///< some violations occurred on inexact iterations
  long checked = 0;
  long violations = 0;
  long inexact_violations = 0;  ///< violations on iterations with inexact inner solves; not failing
  double worst_margin = 0.0;  ///< min over checks of (allowed - observed); negative means violated
  std::string note;

  bool passed() const { return !applicable || violations == 0; }
};

struct LemmaReport {
  std::vector<LemmaCheck> checks;

  bool passed() const;
  const LemmaCheck* find(const std::string& name) const;
};

struct LemmaOptions {
  double identity_tol = 1e-9;       ///< relative, for the multiplier recurrence
  double ineq_slack = 1e-8;         ///< relative slack on Lagrangian inequalities
  double residual_sum_slack = 1e-6; ///< absolute slack on the residual-sum bound
  long max_pairs = 4000000;         ///< cap on (j, k) pairs per pairwise check
  double c_lower = 0.0;             ///< 0 means: use the cycle's own c
};

/// Evaluates the per-iteration relations along one static cycle trace. Throws
/// std::invalid_argument on an empty trace.
/// `base` must come from base_constants for the same problem and parameters.
LemmaReport check_lemma_suite(const CycleResult& cycle, const ConstantsReport& base, const LemmaOptions& options = {});

/// Runs the cycle suite on every cycle of a dynamic solve and adds the
/// cycle-boundary multiplier bound ||p-bar^{l-1}|| <= 2 kappa1 c_l.
LemmaReport check_lemma_suite(const SolveResult& solve, const ConstantsReport& base, const LemmaOptions& options = {});

}  // namespace dpadmm
