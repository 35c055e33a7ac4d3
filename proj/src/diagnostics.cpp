#include "dpadmm/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dpadmm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sq(double x) { return x * x; }

// Accumulates one named inequality "observed <= allowed".
class CheckBuilder {
 public:
  explicit CheckBuilder(std::string name) { check_.name = std::move(name); check_.worst_margin = kInf; }

  void not_applicable(std::string why) {
    check_.applicable = false;
    check_.note = std::move(why);
  }
  void note_inexact() { check_.note = "some iterations used inexact inner solves"; }
  // `soft` marks an iteration whose inner solves were inexact: a violation
  // there is counted separately and does not fail the check.
  void record(double observed, double allowed, bool soft = false) {
    ++check_.checked;
    const double margin = allowed - observed;
    if (!(margin >= 0.0) && soft) {
      ++check_.inexact_violations;
      return;
    }
    check_.worst_margin = std::min(check_.worst_margin, margin);
    if (!(margin >= 0.0)) ++check_.violations;
  }
  LemmaCheck finish() {
    check_.has_warnings = check_.inexact_violations > 0;
    if (!std::isfinite(check_.worst_margin)) check_.worst_margin = 0.0;
    return check_;
  }

 private:
  LemmaCheck check_;
};

void merge_into(LemmaReport& into, const LemmaReport& from) {
  for (const auto& c : from.checks) {
    auto it = std::find_if(into.checks.begin(), into.checks.end(),
                           [&](const LemmaCheck& x) { return x.name == c.name; });
    if (it == into.checks.end()) {
      into.checks.push_back(c);
      continue;
    }
    if (c.applicable && !it->applicable) {
      const long checked = it->checked;
      *it = c;
      it->checked += checked;
      continue;
    }
    if (!c.applicable) continue;
    it->checked += c.checked;
    it->violations += c.violations;
    it->inexact_violations += c.inexact_violations;
    it->worst_margin = std::min(it->worst_margin, c.worst_margin);
    it->has_warnings = it->has_warnings || c.has_warnings;
    if (it->note.empty()) it->note = c.note;
  }
}

}  // namespace

DampeningConstants dampening_constants(double theta, double chi, int num_blocks) {
  DampeningConstants d;
  d.a_theta = theta * (1.0 - theta);
  d.b_theta = (2.0 - theta) * (1.0 - theta);
  d.gamma_theta = ((1.0 - 2.0 * num_blocks * chi * d.b_theta) - sq(1.0 - theta)) / (2.0 * chi);
  return d;
}

ConstantsReport base_constants(const BlockProblem& problem, const SolverParams& params) {
  if (!problem.slater) throw MissingOracleError("complexity constants need Slater data");
  const SlaterData& s = *problem.slater;
  ConstantsReport r;
  r.B = problem.num_blocks();
  r.lambda = params.lambda;
  r.theta = params.theta;
  r.chi = params.chi;

  r.M = problem.max_M();
  r.m = problem.max_m();
  r.Delta_phi = s.phi_hi - s.phi_lo;
  r.D_dagger = s.D_dagger;
  r.d_dagger = s.d_dagger;
  r.G_f = s.G_f;
  r.K_h = s.K_h;
  r.norm_A = s.norm_A;
  r.sigma_A_plus = s.sigma_A_plus;
  r.norm_A_dagger = s.norm_A_dagger;

  const double B = r.B;
  const double theta = r.theta;
  const double chi = r.chi;
  const double lam = r.lambda;

  r.kappa0 = 2.0 * B * B * (lam * r.M + 1.0) / std::sqrt(lam);
  r.kappa1 = theta > 0.0 ? chi * r.norm_A * r.D_dagger / theta : kInf;
  r.kappa2 = theta > 0.0
                 ? (1.0 + 2.0 * chi * r.D_dagger * (r.K_h + r.G_f) / (theta * r.d_dagger * r.sigma_A_plus)) / theta + 1.0
                 : kInf;
  r.kappa3 = 108.0 * sq(r.kappa2) / sq(chi);
  r.kappa4 = theta * r.d_dagger * r.sigma_A_plus / (chi * r.D_dagger);
  r.kappa5 = 8.0 * (B - 1.0) * sq(r.norm_A_dagger);
  r.kappa6 = 3.0 + 8.0 * sq(r.kappa0) * r.Delta_phi / sq(r.kappa4);

  const DampeningConstants d = dampening_constants(theta, chi, r.B);
  r.a_theta = d.a_theta;
  r.b_theta = d.b_theta;
  r.gamma_theta = d.gamma_theta;
  return r;
}

void fill_c_lower_constants(ConstantsReport& r, double c_lower) {
  r.c_lower = c_lower;
  r.kappa_tilde0 = 2.0 * (std::sqrt(r.Delta_phi) + 5.0 * r.kappa2 / (r.chi * std::sqrt(c_lower)));
  r.kappa_tilde1 = 3.0 * r.kappa5 * sq(r.kappa_tilde0);
  r.kappa_tilde2 = 3.0 * sq(r.kappa0) * sq(r.kappa_tilde0);
}

void fill_R_constants(ConstantsReport& r, double R) {
  r.R = R;
  const double rk = R + r.kappa1;
  r.xi0 = 8.0 / sq(r.kappa4) * (9.0 * sq(r.kappa0) * sq(rk) / sq(r.chi) + r.kappa5 * r.Delta_phi) +
          (1.0 - r.theta) * rk;
  r.xi1 = 72.0 * r.kappa5 * sq(rk) / (sq(r.chi) * sq(r.kappa4));
}

double static_iteration_bound(const ConstantsReport& base, double c, double rho, double eta, double c_lower,
                              double R) {
  ConstantsReport r = base;
  fill_c_lower_constants(r, c_lower);
  fill_R_constants(r, R);
  const double constant = r.kappa6 + r.kappa_tilde1 / sq(rho);
  const double linear = r.xi0 + r.kappa3 / sq(eta) + r.kappa_tilde2 / sq(rho);
  return 48.0 * (constant + linear * c + r.xi1 * c * c);
}

double penalty_threshold(const ConstantsReport& base, double rho, double eta, double c_lower, double R) {
  const double t_unit = static_iteration_bound(base, c_lower, 1.0, 1.0, c_lower, R);
  return (t_unit + std::sqrt(c_lower * c_lower * c_lower * t_unit) / std::min(rho, eta)) / sq(c_lower);
}

ConstantsReport compute_constants(const BlockProblem& problem, const SolverParams& params, double c, double c_lower,
                                  double R) {
  ConstantsReport r = base_constants(problem, params);
  fill_c_lower_constants(r, c_lower);
  fill_R_constants(r, R);
  r.c = c;
  r.rho = params.rho;
  r.eta = params.eta;
  r.T_c = static_iteration_bound(r, c, params.rho, params.eta, c_lower, R);
  r.c_hat = penalty_threshold(r, params.rho, params.eta, c_lower, R);

  const double c1 = params.c1;
  const double c1_cubed = c1 * c1 * c1;
  r.T1 = static_iteration_bound(r, c1, 1.0, 1.0, c1, 2.0 * r.kappa1);
  r.E0 = 2.0 * (1.0 + sq(r.T1) / c1_cubed);
  r.E1 = 2.0 * std::sqrt(r.T1 / c1_cubed);
  const double eps = std::min(params.rho, params.eta);
  r.dyn_bound = r.T1 * (2.0 * sq(r.E0) + (r.E0 + 2.0 * sq(r.E1)) / sq(eps) + r.E1 / (eps * eps * eps));
  return r;
}

double multiplier_increment_gap(const Vector& a, const Vector& b, double theta, double zeta) {
  const double lhs = (a - (1.0 - theta) * b).squaredNorm() - zeta * a.squaredNorm();
  const double rhs = 0.5 * ((1.0 - zeta) - sq(1.0 - theta)) * (a.squaredNorm() - b.squaredNorm());
  return lhs - rhs;
}

double stationarity_certificate_residual(const BlockProblem& problem, const BlockVector& x, const Vector& q,
                                         const BlockVector& v, double tau) {
  if (!problem.prox_h) throw MissingOracleError("certificate check needs the prox oracle of h");
  double worst = 0.0;
  for (int t = 0; t < problem.num_blocks(); ++t) {
    const Vector g = problem.grad_block(t, x, x[t]) + problem.A.block(t).adjoint(q) - v[t];
    const Vector moved = problem.prox_h(t, x[t] - tau * g, tau);
    worst = std::max(worst, (x[t] - moved).norm());
  }
  return worst;
}

bool LemmaReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const LemmaCheck& c) { return c.passed(); });
}

const LemmaCheck* LemmaReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

LemmaReport check_lemma_suite(const CycleResult& cycle, const ConstantsReport& base, const LemmaOptions& options) {
  const auto& tel = cycle.telemetry;
  const double c = cycle.c;
  const double theta = cycle.theta;
  const double chi = cycle.chi;
  const double lam = cycle.lambda;
  const int B = base.B;
  const DampeningConstants dc = dampening_constants(theta, chi, B);
  const bool coupling = theta > 0.0 && chi <= 1.0 && chi_theta_condition_holds(chi, theta, B);
  const bool values = !tel.empty() && std::isfinite(tel.front().dal_new);
  const bool exact = std::all_of(tel.begin(), tel.end(), [](const IterationRecord& r) { return r.exact; });
  const std::size_t K = tel.size();

  auto p_norm_prev = [&](std::size_t i) { return i == 0 ? cycle.p0_norm : tel[i - 1].p_norm; };
  auto scale = [](double a, double b = 0.0, double d = 0.0) {
    return 1.0 + std::abs(a) + std::abs(b) + std::abs(d);
  };

  LemmaReport report;
  if (K == 0) throw std::invalid_argument("lemma suite needs at least one iteration of telemetry");

  {
    CheckBuilder b("multiplier_recurrence");
    if (cycle.trace && cycle.trace->p.size() == K + 1 && cycle.trace->f.size() == K) {
      for (std::size_t i = 0; i < K; ++i) {
        const Vector& f = cycle.trace->f[i];
        const Vector implied = (cycle.trace->p[i + 1] - (1.0 - theta) * cycle.trace->p[i]) / (chi * c);
        b.record((f - implied).norm(), options.identity_tol * (1.0 + f.norm()));
      }
    } else {
      for (const auto& r : tel) b.record(r.recurrence_gap, options.identity_tol * (1.0 + r.f_norm));
    }
    report.checks.push_back(b.finish());
  }

  {
    CheckBuilder b("lagrangian_multiplier_identity");
    if (!values) {
      b.not_applicable("no value oracles");
    } else {
      for (std::size_t i = 0; i < K; ++i) {
        const auto& r = tel[i];
        const double lhs = r.dal_new - r.dal_mixed;
        const double rhs = dc.b_theta * sq(r.dp_norm) / (2.0 * chi * c) +
                           dc.a_theta * (sq(r.p_norm) - sq(p_norm_prev(i))) / (2.0 * chi * c);
        b.record(std::abs(lhs - rhs), options.ineq_slack * scale(r.dal_new, r.dal_mixed, rhs));
      }
    }
    report.checks.push_back(b.finish());
  }

  {
    CheckBuilder b("primal_sweep_descent");
    if (!values) {
      b.not_applicable("no value oracles");
    } else {
      if (!exact) b.note_inexact();
      for (const auto& r : tel) {
        const double lhs = r.dal_mixed - r.dal_old;
        const double rhs = -r.dx_sq / (2.0 * lam) - 0.5 * c * r.sum_A_dx_sq;
        b.record(lhs, rhs + options.ineq_slack * scale(r.dal_mixed, r.dal_old), !r.exact);
      }
    }
    report.checks.push_back(b.finish());
  }

  {
    CheckBuilder b("multiplier_increment_bound");
    if (!coupling) {
      b.not_applicable("(chi, theta) coupling condition does not hold");
    } else {
      for (std::size_t i = 1; i < K; ++i) {
        const auto& r = tel[i];
        const double lhs = dc.b_theta * sq(r.dp_norm) / (2.0 * chi * c) - 0.25 * c * r.sum_A_dx_sq;
        const double rhs = dc.gamma_theta / (4.0 * B * chi * c) * (sq(tel[i - 1].dp_norm) - sq(r.dp_norm));
        b.record(lhs, rhs + options.ineq_slack * scale(lhs, rhs, sq(tel[i - 1].dp_norm) / c));
      }
    }
    report.checks.push_back(b.finish());
  }

  {
    CheckBuilder b("potential_descent");
    if (!values) {
      b.not_applicable("no value oracles");
    } else if (!coupling) {
      b.not_applicable("(chi, theta) coupling condition does not hold");
    } else {
      if (!exact) b.note_inexact();
      for (std::size_t i = 1; i < K; ++i) {
        const double drop = tel[i - 1].psi - tel[i].psi;
        b.record(-drop, options.ineq_slack * (1.0 + std::abs(tel[i - 1].psi)), !tel[i].exact);
      }
    }
    report.checks.push_back(b.finish());
  }

  {
    CheckBuilder b("residual_sum_bound");
    if (!values) {
      b.not_applicable("no value oracles");
    } else if (!coupling) {
      b.not_applicable("(chi, theta) coupling condition does not hold");
    } else {
      if (!exact) b.note_inexact();
      const double factor = sq(base.kappa0) + base.kappa5 * c;
      // prefix[i] = sum_{l <= i} ||v^l||^2 with 1-based iterations.
      std::vector<double> prefix(K + 1, 0.0);
      for (std::size_t i = 0; i < K; ++i) prefix[i + 1] = prefix[i] + sq(tel[i].v_norm);
      const std::size_t stride =
          std::max<std::size_t>(1, static_cast<std::size_t>(static_cast<double>(K) * K / options.max_pairs));
      for (std::size_t j = 1; j <= K; j += stride) {
        for (std::size_t k = j + 1; k <= K; ++k) {
          const double lhs = prefix[k] - prefix[j];
          const double rhs = factor * (tel[j - 1].psi - tel[k - 1].psi);
          b.record(lhs, rhs + options.residual_sum_slack, !exact);
        }
      }
    }
    report.checks.push_back(b.finish());
  }

  {
    CheckBuilder up("lagrangian_upper_bound");
    CheckBuilder lo("lagrangian_lower_bound");
    if (!values) {
      up.not_applicable("no value oracles");
      lo.not_applicable("no value oracles");
    } else {
      for (std::size_t i = 0; i < K; ++i) {
        const auto& r = tel[i];
        const double upper = r.phi + 3.0 * (sq(r.p_norm) + sq(p_norm_prev(i))) / (sq(chi) * c);
        up.record(r.dal_new, upper + options.ineq_slack * scale(upper));
        const double lower = r.phi - sq(r.p_norm) / (2.0 * c);
        lo.record(-r.dal_new, -lower + options.ineq_slack * scale(lower));
      }
    }
    report.checks.push_back(up.finish());
    report.checks.push_back(lo.finish());
  }

  {
    CheckBuilder b("multiplier_growth_bound");
    if (!std::isfinite(base.kappa1)) {
      b.not_applicable("kappa1 undefined for theta = 0");
    } else {
      const double bound = cycle.p0_norm + base.kappa1 * c;
      for (const auto& r : tel) b.record(r.p_norm, bound * (1.0 + options.identity_tol));
    }
    report.checks.push_back(b.finish());
  }

  {
    CheckBuilder b("average_multiplier_bound");
    if (!std::isfinite(base.kappa2) || !coupling) {
      b.not_applicable("requires theta > 0 and the (chi, theta) coupling condition");
    } else {
      ConstantsReport r = base;
      fill_R_constants(r, cycle.p0_norm / c);
      const double gap = r.kappa6 + r.xi0 * c + r.xi1 * c * c;
      std::vector<double> prefix(K + 1, 0.0);
      for (std::size_t i = 0; i < K; ++i) prefix[i + 1] = prefix[i] + tel[i].p_norm;
      if (static_cast<double>(K) - 1.0 < gap) {
        b.not_applicable("trace shorter than the required gap k - j >= " + std::to_string(gap));
      } else {
        const auto min_gap = static_cast<std::size_t>(std::ceil(gap));
        for (std::size_t j = 1; j + min_gap <= K; ++j) {
          for (std::size_t k = j + min_gap; k <= K; ++k) {
            // S_{j+1,k}^(p) averages ||p^i|| over i = j+1..k.
            const double avg = (prefix[k] - prefix[j]) / static_cast<double>(k - j);
            b.record(avg, base.kappa2);
          }
        }
      }
    }
    report.checks.push_back(b.finish());
  }

  return report;
}

LemmaReport check_lemma_suite(const SolveResult& solve, const ConstantsReport& base, const LemmaOptions& options) {
  LemmaReport report;
  for (const auto& cycle : solve.cycle_results) merge_into(report, check_lemma_suite(cycle, base, options));

  CheckBuilder b("cycle_start_multiplier_bound");
  if (!std::isfinite(base.kappa1)) {
    b.not_applicable("kappa1 undefined for theta = 0");
  } else {
    for (const auto& cyc : solve.cycles) {
      b.record(cyc.p0_norm / cyc.c, 2.0 * base.kappa1 * (1.0 + options.identity_tol));
    }
  }
  report.checks.push_back(b.finish());
  return report;
}

}  // namespace dpadmm
