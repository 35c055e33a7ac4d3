#include "dpadmm/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace dpadmm {

double BlockProblem::max_m() const {
  double out = 0.0;
  for (double v : m) out = std::max(out, v);
  return out;
}

double BlockProblem::max_M() const {
  double out = 0.0;
  for (double v : M) out = std::max(out, v);
  return out;
}

void BlockProblem::validate(double image_tol) const {
  const int B = structure.num_blocks();
  if (A.num_blocks() != B) throw DimensionError("A must have one operator per block");
  for (int t = 0; t < B; ++t) {
    if (A.block(t).cols() != structure.dims[static_cast<std::size_t>(t)]) {
      throw DimensionError("A_" + std::to_string(t + 1) + " column count differs from n_t");
    }
  }
  if (A.rows() != structure.constraint_dim) throw DimensionError("A row count differs from ell");
  if (d.size() != structure.constraint_dim) throw DimensionError("d must have length ell");
  if (static_cast<int>(m.size()) != B) throw std::invalid_argument("m must have B entries");
  if (static_cast<int>(M.size()) != std::max(B - 1, 0)) throw std::invalid_argument("M must have B-1 entries");
  for (double v : m) {
    if (!(v >= 0.0)) throw std::invalid_argument("m_t must be nonnegative");
  }
  for (double v : M) {
    if (!(v >= 0.0)) throw std::invalid_argument("M_t must be nonnegative");
  }
  if (!grad_block) throw MissingOracleError("grad_block oracle is required");
  if (!prox_block && !prox_h) throw MissingOracleError("either prox_block or prox_h is required");

  const double dnorm = d.norm();
  if (dnorm > 0.0) {
    const double res = least_squares_residual(A, d);
    if (res > image_tol * (1.0 + dnorm)) {
      std::ostringstream os;
      os << "d is not in the image of A (least-squares residual " << res << ")";
      throw std::invalid_argument(os.str());
    }
  }
  if (slater) {
    slater->z_dagger.require_matches(structure, "slater.z_dagger");
    const double feas = (A.apply(slater->z_dagger) - d).norm();
    if (feas > 1e-8 * (1.0 + dnorm)) throw std::invalid_argument("slater point z_dagger is not feasible");
  }
}

double least_squares_residual(const BlockOperator& A, const Vector& d, BlockVector* solution) {
  // CGLS on min ||Ax - d|| starting from x = 0.
  BlockVector x = A.adjoint(Vector::Zero(A.rows()));
  Vector r = d;
  BlockVector s = A.adjoint(r);
  BlockVector dir = s;
  double gamma = s.squared_norm();
  const int max_iter = std::max(200, 2 * x.total_dim());
  const double stop = 1e-30 * std::max(1.0, gamma);
  for (int it = 0; it < max_iter && gamma > stop; ++it) {
    const Vector q = A.apply(dir);
    const double qq = q.squaredNorm();
    if (qq == 0.0) break;
    const double alpha = gamma / qq;
    for (int t = 0; t < x.num_blocks(); ++t) x[t] += alpha * dir[t];
    r -= alpha * q;
    s = A.adjoint(r);
    const double gamma_new = s.squared_norm();
    const double beta = gamma_new / gamma;
    gamma = gamma_new;
    for (int t = 0; t < x.num_blocks(); ++t) dir[t] = s[t] + beta * dir[t];
  }
  const double residual = (A.apply(x) - d).norm();
  if (solution) *solution = std::move(x);
  return residual;
}

double eval_phi(const BlockProblem& problem, const BlockVector& x) {
  if (!problem.has_values()) throw MissingOracleError("phi_smooth and h_value oracles are required to evaluate phi");
  double value = problem.phi_smooth(x);
  for (int t = 0; t < x.num_blocks(); ++t) value += problem.h_value(t, x[t]);
  return value;
}

double eval_dal(const BlockProblem& problem, const BlockVector& x, const Vector& p, double c, double theta) {
  const Vector res = constraint_residual(problem, x);
  if (p.size() != res.size()) throw DimensionError("multiplier length differs from ell");
  return eval_phi(problem, x) + (1.0 - theta) * p.dot(res) + 0.5 * c * res.squaredNorm();
}

Vector constraint_residual(const BlockProblem& problem, const BlockVector& x) {
  x.require_matches(problem.structure, "constraint_residual");
  return problem.A.apply(x) - problem.d;
}

const char* to_string(WindowMode mode) {
  return mode == WindowMode::HalfWindow ? "half_window" : "full_average";
}

WindowMode window_mode_from_string(const std::string& name) {
  if (name == "half_window" || name == "half") return WindowMode::HalfWindow;
  if (name == "full_average" || name == "full") return WindowMode::FullAverage;
  throw std::invalid_argument("unknown window mode '" + name + "'");
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (const auto& e : errors) os << "error: " << e.field << ": " << e.message << '\n';
  for (const auto& w : warnings) os << "warning: " << w.field << ": " << w.message << '\n';
  return os.str();
}

double chi_theta_lhs(double chi, double theta, int num_blocks) {
  return 2.0 * chi * num_blocks * (2.0 - theta) * (1.0 - theta);
}

bool chi_theta_condition_holds(double chi, double theta, int num_blocks) {
  // Relative slack absorbs rounding at the boundary, e.g. (1/2, 1/18) with B = 3.
  const double rhs = theta * theta;
  return chi_theta_lhs(chi, theta, num_blocks) <= rhs * (1.0 + 1e-12) + 1e-300;
}

double max_admissible_chi(double theta, int num_blocks) {
  if (theta >= 1.0) return 1.0;
  if (theta <= 0.0) return 0.0;
  return std::min(1.0, theta * theta / (2.0 * num_blocks * (2.0 - theta) * (1.0 - theta)));
}

ValidationReport validate_params(const SolverParams& params, int num_blocks, double max_m) {
  ValidationReport report;
  auto error = [&](std::string field, std::string msg) { report.errors.push_back({std::move(field), std::move(msg)}); };

  if (!(params.lambda > 0.0)) {
    error("lambda", "must be positive");
  } else if (max_m > 0.0 && params.lambda > 1.0 / (2.0 * max_m) * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "must satisfy lambda <= 1/(2m) = " << 1.0 / (2.0 * max_m);
    error("lambda", os.str());
  }
  if (!(params.c1 > 0.0)) error("c1", "must be positive");
  if (!(params.rho > 0.0)) error("rho", "must be positive");
  if (!(params.eta > 0.0)) error("eta", "must be positive");
  if (params.max_cycle_iters < 1) error("max_cycle_iters", "must be at least 1");
  if (params.max_outer_cycles < 1) error("max_outer_cycles", "must be at least 1");
  if (params.max_total_iters < 0) error("max_total_iters", "must be nonnegative");
  if (!(params.chi > 0.0)) error("chi", "must be positive");
  if (!(params.theta >= 0.0 && params.theta <= 1.0)) error("theta", "must lie in [0, 1]");
  if (!(params.inner.sigma > 0.0 && params.inner.sigma < 1.0)) error("inner.sigma", "must lie in (0, 1)");
  if (params.inner.max_inner < 1) error("inner.max_inner", "must be at least 1");
  if (!report.ok()) return report;

  std::vector<ParamIssue> theory;
  if (params.theta <= 0.0) theory.push_back({"theta", "theta = 0 lies outside (0, 1]"});
  if (params.chi > 1.0) theory.push_back({"chi", "chi > 1 lies outside (0, 1]"});
  if (!chi_theta_condition_holds(params.chi, params.theta, num_blocks)) {
    std::ostringstream os;
    os << "2*chi*B*(2-theta)*(1-theta) = " << chi_theta_lhs(params.chi, params.theta, num_blocks)
       << " exceeds theta^2 = " << params.theta * params.theta;
    theory.push_back({"chi", os.str()});
  }
  auto& sink = params.strict_params ? report.errors : report.warnings;
  sink.insert(sink.end(), theory.begin(), theory.end());
  return report;
}

}  // namespace dpadmm
