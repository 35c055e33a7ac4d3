#include "dpadmm/inner_solvers.hpp"

#include <cmath>
#include <sstream>

#include "dpadmm/kernels.hpp"

namespace dpadmm {

namespace {

std::span<const double> view(const Vector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }
std::span<double> view(Vector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

Vector residual_at(const BlockSubproblem& sub, const Vector& u) {
  Vector res = sub.residual_base;
  sub.A_t->apply_add(u, res);
  return res;
}

}  // namespace

Vector BlockSubproblem::linear_vec() const {
  return lambda * A_t->adjoint(dual_shift + c * residual_base);
}

Vector BlockSubproblem::smooth_gradient(const Vector& u) const {
  const Vector res = residual_at(*this, u);
  return lambda * (grad_f(u) + A_t->adjoint(dual_shift + c * res)) + (u - center);
}

double BlockSubproblem::smooth_value(const Vector& u) const {
  if (!value_f) throw MissingOracleError("subproblem value needs the f value oracle");
  const Vector res = residual_at(*this, u);
  return lambda * (value_f(u) + dual_shift.dot(res) + 0.5 * c * res.squaredNorm()) + 0.5 * (u - center).squaredNorm();
}

double BlockSubproblem::objective(const Vector& u) const {
  if (!h_value) throw MissingOracleError("subproblem objective needs the h value oracle");
  return smooth_value(u) + lambda * h_value(u);
}

Vector solve_exact_diag(const BlockSubproblem& sub, double alpha_t, const Vector& beta_t, double box_radius,
                        double gram_scale) {
  if (sub.A_t == nullptr) throw ExactSolverPrecondition("subproblem has no operator A_t");
  const auto op_gram = sub.A_t->gram_scale();
  if (!op_gram || std::abs(*op_gram - gram_scale) > 1e-12 * (1.0 + std::abs(gram_scale))) {
    throw ExactSolverPrecondition("A_t^*A_t is not the stated multiple of the identity; use solve_inexact instead");
  }
  if (beta_t.size() != sub.center.size()) throw DimensionError("beta_t length differs from n_t");
  if (!(box_radius > 0.0)) throw ExactSolverPrecondition("box radius must be positive");

  const double diag = 1.0 - sub.lambda * alpha_t + sub.quad_coeff() * gram_scale;
  if (!(diag > 0.0)) {
    std::ostringstream os;
    os << "subproblem is not strongly convex (diagonal " << diag << "); check lambda <= 1/(2m)";
    throw ExactSolverPrecondition(os.str());
  }
  // Stationarity per coordinate: diag * u_i = center_i + lambda beta_i - [lambda A_t^*(shift + c base)]_i.
  const Vector linear = sub.linear_vec();
  Vector rhs(sub.center.size());
  kernels::parallel::axpby(1.0, view(sub.center), sub.lambda, view(beta_t), view(rhs));
  rhs -= linear;
  Vector u(sub.center.size());
  kernels::parallel::box_diag_solve(view(rhs), diag, box_radius, view(u));
  return u;
}

InexactSolution solve_inexact(const BlockSubproblem& sub, const InexactCriterion& crit) {
  if (!sub.prox_h) throw MissingOracleError("inexact solve needs the prox oracle of h_t");
  if (!(crit.sigma > 0.0 && crit.sigma < 1.0)) throw std::invalid_argument("sigma must lie in (0, 1)");

  const double op_norm = sub.A_t->norm();
  double lipschitz = 1.0 + sub.quad_coeff() * op_norm * op_norm;
  const bool use_values = static_cast<bool>(sub.value_f);

  Vector u = sub.center;
  Vector grad = sub.smooth_gradient(u);
  double value = use_values ? sub.smooth_value(u) : 0.0;
  Vector r = Vector::Zero(u.size());

  for (int iter = 0; iter < crit.max_inner; ++iter) {
    Vector next;
    Vector grad_next;
    double value_next = 0.0;
    for (int backtrack = 0; backtrack < 60; ++backtrack) {
      next = sub.prox_h(u - grad / lipschitz, sub.lambda / lipschitz);
      grad_next = sub.smooth_gradient(next);
      const Vector step = next - u;
      bool accepted;
      if (use_values) {
        value_next = sub.smooth_value(next);
        const double model = value + grad.dot(step) + 0.5 * lipschitz * step.squaredNorm();
        accepted = value_next <= model + 1e-12 * (1.0 + std::abs(value));
      } else {
        accepted = (grad_next - grad).norm() <= lipschitz * step.norm() * (1.0 + 1e-12);
      }
      if (accepted) break;
      lipschitz *= 2.0;
    }
    if (next == u) {
      // Fixed point of the prox-gradient map: u is the exact minimizer.
      r.setZero();
      return {u, r, iter};
    }
    // (u - next) L - grad(u) lies in lambda dh_t(next), so r lies in the full
    // subdifferential at next.
    r = grad_next - grad + lipschitz * (u - next);
    u = std::move(next);
    grad = std::move(grad_next);
    value = value_next;
    if (r.squaredNorm() <= crit.sigma * crit.sigma * (sub.center - u).squaredNorm()) {
      return {u, r, iter + 1};
    }
  }
  std::ostringstream os;
  os << "inexact inner solver for block " << sub.t + 1 << " exceeded " << crit.max_inner << " iterations";
  throw InnerBudgetError(os.str(), u, r);
}

SubproblemSolution solve_subproblem(const BlockProblem& problem, const BlockSubproblem& sub,
                                    const SolverParams& params) {
  if (problem.has_exact_solver() && !params.force_inexact) {
    return {problem.prox_block(sub), 0.0, 0, true};
  }
  InexactSolution s = solve_inexact(sub, params.inner);
  return {std::move(s.u), s.r.norm(), s.iterations, false};
}

}  // namespace dpadmm
