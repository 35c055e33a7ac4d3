#pragma once

#include <functional>
#include <stdexcept>

#include "dpadmm/block_vector.hpp"
#include "dpadmm/linear_operator.hpp"
#include "dpadmm/problem.hpp"

namespace dpadmm {

/// One block of the Gauss-Seidel prox sweep:
///
///   min_u  lambda * L_c^theta(x_{<t}^k, u, x_{>t}^{k-1}; p^{k-1}) + 1/2 ||u - center||^2
///
/// with the other blocks frozen into `residual_base` and the multiplier into
/// `dual_shift`.
struct BlockSubproblem {
  int t = 0;
  double lambda = 0.0;
  double c = 0.0;
  double m_t = 0.0;
  Vector center;         ///< x_t^{k-1}
  Vector residual_base;  ///< sum_{s<t} A_s x_s^k + sum_{s>t} A_s x_s^{k-1} - d
  Vector dual_shift;     ///< (1 - theta) p^{k-1}
  const LinearOperator* A_t = nullptr;
  std::function<Vector(const Vector&)> grad_f;          ///< u -> grad_t f(x_{<t}^k, u, x_{>t}^{k-1})
  std::function<double(const Vector&)> value_f;        ///< optional: u -> f(x_{<t}^k, u, x_{>t}^{k-1})
  std::function<Vector(const Vector&, double)> prox_h;  ///< (v, tau) -> prox_{tau h_t}(v)
  std::function<double(const Vector&)> h_value;        ///< optional: u -> h_t(u)

  /// Coefficient lambda * c of the 1/2 ||A_t u||^2 term.
  double quad_coeff() const { return lambda * c; }
  /// lambda * A_t^*(dual_shift + c * residual_base), the u-independent part of the linear term.
  Vector linear_vec() const;
  /// Modulus 1 - lambda m_t of the subproblem's strong convexity (at least 1/2 for admissible lambda).
  double strong_convexity() const { return 1.0 - lambda * m_t; }

  /// Gradient of the smooth part
  ///   s(u) = lambda [f(u) + <dual_shift, A_t u + base> + c/2 ||A_t u + base||^2] + 1/2 ||u - center||^2.
  Vector smooth_gradient(const Vector& u) const;
  /// s(u); requires value_f.
  double smooth_value(const Vector& u) const;
  /// s(u) + lambda h_t(u); requires value_f and h_value.
  double objective(const Vector& u) const;
};

/// Inner solver ran out of iterations; carries the last iterate.
class InnerBudgetError : public std::runtime_error {
 public:
  InnerBudgetError(const std::string& what, Vector best_u, Vector best_r)
      : std::runtime_error(what), best_u(std::move(best_u)), best_r(std::move(best_r)) {}
  Vector best_u;
  Vector best_r;
};

/// Raised when solve_exact_diag's structural preconditions fail.
class ExactSolverPrecondition : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Exact solve for a block with f_t(u) = -(alpha/2)||u||^2 - <beta, u>, h_t the
/// indicator of [-radius, radius]^{n_t} and A_t^*A_t = gram_scale * I. The
/// problem separates per coordinate into a strongly convex 1-D quadratic
/// followed by clipping.
Vector solve_exact_diag(const BlockSubproblem& sub, double alpha_t, const Vector& beta_t, double box_radius,
                        double gram_scale);

struct InexactSolution {
  Vector u;
  Vector r;  ///< certified element of the subproblem subdifferential at u
  int iterations = 0;
};

/// Proximal gradient with backtracking until ||r||^2 <= sigma^2 ||center - u||^2,
/// where r is built from the prox optimality identity at the accepted step.
/// Throws InnerBudgetError after crit.max_inner steps.
InexactSolution solve_inexact(const BlockSubproblem& sub, const InexactCriterion& crit);

struct SubproblemSolution {
  Vector u;
  double residual_norm = 0.0;  ///< ||r||, zero for exact solves
  int inner_iterations = 0;
  bool exact = true;
};

/// Dispatches to the problem's exact solver when available (and not forced off),
/// otherwise to solve_inexact.
SubproblemSolution solve_subproblem(const BlockProblem& problem, const BlockSubproblem& sub,
                                    const SolverParams& params);

}  // namespace dpadmm
