#include <doctest.h>

#include <cmath>
#include <random>

#include "dpadmm/bench.hpp"
#include "dpadmm/diagnostics.hpp"
#include "oracles.hpp"
#include "test_problems.hpp"

using namespace dpadmm;

namespace {

SolverParams dp2_params() {
  SolverParams p;
  p.theta = 0.5;
  p.chi = 1.0 / 18.0;
  return p;
}

// Corners of the box [-r, r]^dim, enumerated by bit pattern.
template <typename Fn>
void for_each_corner(int dim, double r, Fn&& fn) {
  Vector z(dim);
  for (long mask = 0; mask < (1L << dim); ++mask) {
    for (int i = 0; i < dim; ++i) z(i) = (mask >> i) & 1 ? r : -r;
    fn(z);
  }
}

}  // namespace

TEST_CASE("dampening constants") {
  const DampeningConstants one = dampening_constants(1.0, 0.7, 3);
  CHECK(one.a_theta == 0.0);
  CHECK(one.b_theta == 0.0);
  CHECK(one.gamma_theta == doctest::Approx(1.0 / 1.4));

  const DampeningConstants dp2 = dampening_constants(0.5, 1.0 / 18.0, 3);
  CHECK(dp2.a_theta == doctest::Approx(0.25));
  CHECK(dp2.b_theta == doctest::Approx(0.75));
  CHECK(dp2.gamma_theta == doctest::Approx(4.5));
}

TEST_CASE("gamma_theta lies in [theta(1-theta)/chi, 1/(2 chi)] under the coupling condition") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const int B = 1 + trial % 6;
    const double theta = 0.01 + 0.99 * u01(gen);
    const double chi = max_admissible_chi(theta, B) * (0.01 + 0.99 * u01(gen));
    REQUIRE(chi_theta_condition_holds(chi, theta, B));
    const double g = dampening_constants(theta, chi, B).gamma_theta;
    CHECK(g >= theta * (1.0 - theta) / chi * (1.0 - 1e-12));
    CHECK(g <= 1.0 / (2.0 * chi) * (1.0 + 1e-12));
  }
  // The stronger bound gamma_theta >= theta/chi fails at the DP2 point: 4.5 < 9.
  CHECK(dampening_constants(0.5, 1.0 / 18.0, 3).gamma_theta < 0.5 / (1.0 / 18.0));
}

TEST_CASE("Slater data of the three-block family, n = 2, gamma = 1") {
  const QpInstance inst = generate(2, 1.0, 13);
  const BlockProblem p = inst.problem();
  REQUIRE(p.slater);
  const SlaterData& s = *p.slater;
  CHECK(s.z_dagger.norm() < 1e-12);
  CHECK(s.d_dagger == doctest::Approx(1.0));
  CHECK(s.norm_A == doctest::Approx(std::sqrt(3.0)));
  CHECK(s.sigma_A_plus == doctest::Approx(1.0));
  CHECK(s.norm_A_dagger == doctest::Approx(2.0 + std::sqrt(2.0)));
  CHECK(s.K_h == 0.0);

  double D = 0.0;
  double G = 0.0;
  for_each_corner(6, 1.0, [&](const Vector& z) {
    D = std::max(D, z.norm());
    Vector g(6);
    g << -inst.alpha[0] * z.segment(0, 2) - inst.beta[0], -inst.alpha[1] * z.segment(2, 2) - inst.beta[1],
        Vector::Zero(2);
    G = std::max(G, g.norm());
  });
  CHECK(s.D_dagger == doctest::Approx(D));
  CHECK(s.D_dagger == doctest::Approx(std::sqrt(6.0)));
  CHECK(s.G_f == doctest::Approx(G));
}

TEST_CASE("phi range of the three-block family against a grid oracle") {
  const QpInstance inst = generate(1, 0.8, 21);
  const BlockProblem p = inst.problem();
  double lo = 0.0;
  double hi = 0.0;
  for (int t = 0; t < 2; ++t) {
    const double a = inst.alpha[t];
    const double b = inst.beta[t](0);
    double cmin = INFINITY;
    double cmax = -INFINITY;
    for (int i = 0; i <= 200000; ++i) {
      const double u = -0.8 + 1.6 * i / 200000.0;
      const double g = -0.5 * a * u * u - b * u;
      cmin = std::min(cmin, g);
      cmax = std::max(cmax, g);
    }
    lo += cmin;
    hi += cmax;
  }
  CHECK(p.slater->phi_lo == doctest::Approx(lo).epsilon(1e-8));
  CHECK(p.slater->phi_hi == doctest::Approx(hi).epsilon(1e-8));
}

TEST_CASE("constants are nonnegative and follow their formulas") {
  const BlockProblem p = generate(4, 2.0, 3).problem();
  const SolverParams params = dp2_params();
  const ConstantsReport r = compute_constants(p, params, 2.0, 1.0, 0.5);
  for (double k : {r.kappa0, r.kappa1, r.kappa2, r.kappa3, r.kappa4, r.kappa5, r.kappa6, r.kappa_tilde0,
                   r.kappa_tilde1, r.kappa_tilde2, r.xi0, r.xi1, r.T_c, r.c_hat, r.T1, r.E0, r.E1, r.dyn_bound}) {
    CHECK(k >= 0.0);
    CHECK(std::isfinite(k));
  }
  const SlaterData& s = *p.slater;
  CHECK(r.kappa0 == doctest::Approx(2.0 * 9.0 * 1.0 / std::sqrt(0.5)));
  CHECK(r.kappa1 == doctest::Approx(params.chi * std::sqrt(3.0) * s.D_dagger / 0.5));
  CHECK(r.kappa4 == doctest::Approx(0.5 * s.d_dagger * 1.0 / (params.chi * s.D_dagger)));
  CHECK(r.kappa5 == doctest::Approx(16.0 * std::pow(2.0 + std::sqrt(2.0), 2)));
  CHECK(r.kappa3 == doctest::Approx(108.0 * r.kappa2 * r.kappa2 / (params.chi * params.chi)));
  CHECK(r.E1 == doctest::Approx(2.0 * std::sqrt(r.T1)));
  CHECK(r.Delta_phi == doctest::Approx(s.phi_hi - s.phi_lo));
}

TEST_CASE("theta = 1 collapses a_theta and b_theta") {
  const BlockProblem p = generate(3, 1.0, 2).problem();
  SolverParams params;
  params.theta = 1.0;
  params.chi = 0.5;
  const ConstantsReport r = base_constants(p, params);
  const SlaterData& s = *p.slater;
  CHECK(r.a_theta == 0.0);
  CHECK(r.b_theta == 0.0);
  CHECK(r.kappa2 == doctest::Approx(1.0 + 2.0 * 0.5 * s.D_dagger * s.G_f / (s.d_dagger * s.sigma_A_plus) + 1.0));
}

TEST_CASE("theta = 0 leaves kappa1 and kappa2 undefined") {
  const BlockProblem p = generate(3, 1.0, 2).problem();
  SolverParams params;
  params.theta = 0.0;
  params.chi = 1.0;
  const ConstantsReport r = base_constants(p, params);
  CHECK(std::isinf(r.kappa1));
  CHECK(std::isinf(r.kappa2));
}

TEST_CASE("static bound monotonicity and the penalty scaling inequality") {
  const BlockProblem p = generate(5, 3.0, 4).problem();
  const ConstantsReport base = base_constants(p, dp2_params());
  const double c_lower = 1.0;
  const double R = 0.7;
  double prev = 0.0;
  for (double c : {1.0, 2.0, 4.0, 8.0, 16.0}) {
    const double T = static_iteration_bound(base, c, 1e-3, 1e-3, c_lower, R);
    CHECK(T > prev);
    prev = T;
  }
  double prev_hat = 0.0;
  for (double eps : {1.0, 1e-1, 1e-3, 1e-6, 1e-9}) {
    const double h = penalty_threshold(base, eps, eps, c_lower, R);
    CHECK(h >= prev_hat);
    prev_hat = h;
  }

  std::mt19937_64 gen(6);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const double unit = static_iteration_bound(base, c_lower, 1.0, 1.0, c_lower, R);
  for (int trial = 0; trial < 500; ++trial) {
    const double c = c_lower * std::pow(2.0, 10.0 * u01(gen));
    const double rho = std::pow(10.0, -9.0 * u01(gen));
    const double eta = std::pow(10.0, -9.0 * u01(gen));
    const double lhs = static_iteration_bound(base, c, rho, eta, c_lower, R);
    const double m2 = std::min(rho * rho, eta * eta);
    const double rhs = ((c / c_lower) * (c / c_lower) + c / (c_lower * m2)) * unit;
    CHECK(lhs <= rhs * (1.0 + 1e-12));
  }
}

TEST_CASE("constants need Slater data") {
  const BlockProblem p = testing_problems::two_scalar_blocks();
  CHECK_THROWS_AS(compute_constants(p, dp2_params(), 1.0, 1.0, 0.0), MissingOracleError);
}

TEST_CASE("dampened multiplier increment inequality on random samples") {
  std::mt19937_64 gen(10);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int trial = 0; trial < 5000; ++trial) {
    const double theta = u01(gen);
    const double zeta = theta * theta * u01(gen);
    const Vector a = oracle::random_vector(gen, 4, -2, 2);
    const Vector b = oracle::random_vector(gen, 4, -2, 2);
    CHECK(multiplier_increment_gap(a, b, theta, zeta) >= -1e-10);
  }
}

TEST_CASE("lemma suite passes on a DP2 trace of the three-block family") {
  const BlockProblem p = generate(10, 100.0, 7).problem();
  SolverParams params = dp2_params();
  params.trace_vectors = true;
  const SolveResult r = run(p, BlockVector(p.structure), params);
  const LemmaReport report = check_lemma_suite(r, base_constants(p, params));
  for (const auto& c : report.checks) {
    CAPTURE(c.name);
    CHECK(c.passed());
  }
  for (const char* name : {"multiplier_recurrence", "lagrangian_multiplier_identity", "primal_sweep_descent",
                           "multiplier_increment_bound", "potential_descent", "residual_sum_bound",
                           "lagrangian_upper_bound", "lagrangian_lower_bound", "multiplier_growth_bound",
                           "cycle_start_multiplier_bound"}) {
    const LemmaCheck* c = report.find(name);
    REQUIRE(c != nullptr);
    CHECK(c->applicable);
    CHECK(c->checked > 0);
  }
  CHECK_FALSE(report.find("average_multiplier_bound")->applicable);
}

TEST_CASE("corrupted multiplier history fails the recurrence check") {
  const BlockProblem p = generate(6, 10.0, 3).problem();
  SolverParams params = dp2_params();
  params.trace_vectors = true;
  CycleResult cycle = run_static_cycle(p, BlockVector(p.structure), Vector::Zero(12), 1.0, params);
  REQUIRE(cycle.trace->p.size() > 3);
  cycle.trace->p[2](0) += 1e-3;
  const LemmaReport report = check_lemma_suite(cycle, base_constants(p, params));
  const LemmaCheck* c = report.find("multiplier_recurrence");
  CHECK(c->violations > 0);
  CHECK_FALSE(report.passed());

  // Without vectors the stored recurrence gap is used; corrupting it fails as well.
  cycle.trace.reset();
  cycle.telemetry[1].recurrence_gap = 1.0;
  CHECK(check_lemma_suite(cycle, base_constants(p, params)).find("multiplier_recurrence")->violations == 1);
}

TEST_CASE("zero-step trace satisfies every check") {
  BlockProblem p = testing_problems::two_scalar_blocks(2.0);
  SlaterData s;
  s.z_dagger = BlockVector(p.structure);
  s.d_dagger = 2.0;
  s.D_dagger = 2.0 * std::sqrt(2.0);
  s.norm_A = std::sqrt(2.0);
  s.sigma_A_plus = std::sqrt(2.0);
  s.norm_A_dagger = 2.0;
  p.slater = s;
  SolverParams params;
  params.theta = 0.5;
  params.chi = max_admissible_chi(0.5, 2);
  const CycleResult cycle = run_static_cycle(p, BlockVector(p.structure), Vector::Zero(1), 1.0, params);
  REQUIRE(cycle.iterations == 1);
  const LemmaReport report = check_lemma_suite(cycle, base_constants(p, params));
  CHECK(report.passed());
}

TEST_CASE("lemma suite needs telemetry") {
  const BlockProblem p = generate(2, 1.0, 1).problem();
  CycleResult empty;
  CHECK_THROWS_AS(check_lemma_suite(empty, base_constants(p, dp2_params())), std::invalid_argument);
}

TEST_CASE("average multiplier bound on a synthetic trace") {
  ConstantsReport base;
  base.B = 3;
  base.theta = 0.5;
  base.chi = 1.0 / 18.0;
  base.kappa0 = 1.0;
  base.kappa1 = 0.1;
  base.kappa2 = 2.0;
  base.kappa4 = 1e12;
  base.kappa5 = 1.0;
  base.kappa6 = 3.0;
  base.Delta_phi = 1.0;

  CycleResult cycle;
  cycle.c = 1.0;
  cycle.theta = 0.5;
  cycle.chi = 1.0 / 18.0;
  cycle.lambda = 0.5;
  for (int k = 1; k <= 12; ++k) {
    IterationRecord rec;
    rec.k = k;
    rec.p_norm = 1.0;
    rec.dal_new = rec.dal_mixed = rec.dal_old = rec.phi = rec.psi = NAN;
    cycle.telemetry.push_back(rec);
  }
  const LemmaCheck* ok = check_lemma_suite(cycle, base).find("average_multiplier_bound");
  REQUIRE(ok->applicable);
  CHECK(ok->checked > 0);
  CHECK(ok->violations == 0);

  for (auto& rec : cycle.telemetry) rec.p_norm = 3.0;
  const LemmaCheck* bad = check_lemma_suite(cycle, base).find("average_multiplier_bound");
  CHECK(bad->violations == bad->checked);
}

TEST_CASE("inexact iterations only produce warnings") {
  const BlockProblem p = generate(4, 5.0, 12).problem();
  SolverParams params = dp2_params();
  params.force_inexact = true;
  params.inner.sigma = 0.5;
  params.rho = params.eta = 1e-5;
  params.max_total_iters = 300;
  const SolveResult r = run(p, BlockVector(p.structure), params);
  const LemmaReport report = check_lemma_suite(r, base_constants(p, params));
  for (const char* name : {"primal_sweep_descent", "potential_descent", "residual_sum_bound"}) {
    const LemmaCheck* c = report.find(name);
    CAPTURE(name);
    CHECK(c->violations == 0);
    CHECK(c->has_warnings == (c->inexact_violations > 0));
  }
}

TEST_CASE("stationarity certificate") {
  const BlockProblem p = generate(10, 100.0, 7).problem();
  const SolveResult r = run(p, BlockVector(p.structure), dp2_params());
  REQUIRE(r.status == SolveStatus::Success);
  CHECK(stationarity_certificate_residual(p, r.z_bar, r.q_bar, r.v_bar) <= 1e-7);

  // An interior point with a wrong multiplier is not certified.
  const BlockVector zero(p.structure);
  CHECK(stationarity_certificate_residual(p, zero, Vector::Ones(20), BlockVector(p.structure)) > 1e-3);
}
