#include <doctest.h>

#include "dpadmm/bench.hpp"
#include "dpadmm/diagnostics.hpp"
#include "dpadmm/dynamic_admm.hpp"
#include "test_problems.hpp"

using namespace dpadmm;

namespace {

SolverParams dp2(double tol = 1e-9) {
  SolverParams p;
  p.rho = p.eta = tol;
  return p;
}

}  // namespace

TEST_CASE("stationary feasible start: one cycle, one iteration") {
  const BlockProblem p = testing_problems::two_scalar_blocks();
  const SolveResult r = run(p, BlockVector(p.structure), dp2());
  CHECK(r.status == SolveStatus::Success);
  CHECK(r.cycles.size() == 1);
  CHECK(r.total_iterations == 1);
}

TEST_CASE("three-block instance n = 10, gamma = 100 with DP2") {
  const BlockProblem p = generate(10, 100.0, 7).problem();
  const SolveResult r = run(p, BlockVector(p.structure), dp2());
  REQUIRE(r.status == SolveStatus::Success);
  CHECK(r.v_norm <= 1e-9);
  CHECK(r.feas_norm <= 1e-9);
  CHECK(r.total_iterations >= 156 / 10);
  CHECK(r.total_iterations <= 156 * 10);
}

TEST_CASE("penalty doubles across cycles and each cycle warm starts from the last") {
  const BlockProblem p = generate(6, 50.0, 2).problem();
  SolverParams params = dp2();
  params.max_cycle_iters = 3;  // every cycle but possibly the last runs out of budget
  params.c1 = 0.25;
  const SolveResult r = run(p, BlockVector(p.structure), params);
  REQUIRE(r.cycles.size() >= 2);
  long total = 0;
  for (std::size_t l = 0; l < r.cycles.size(); ++l) {
    CHECK(r.cycles[l].c == 0.25 * std::pow(2.0, static_cast<double>(l)));
    total += r.cycles[l].iterations;
  }
  CHECK(total == r.total_iterations);
  CHECK(r.cycles.front().p0_norm == 0.0);

  // Re-running cycle l from cycle l-1's output reproduces it bitwise.
  for (std::size_t l = 1; l < std::min<std::size_t>(r.cycle_results.size(), 4); ++l) {
    const CycleResult& prev = r.cycle_results[l - 1];
    const CycleResult again = run_static_cycle(p, prev.x_out, prev.p_out, r.cycles[l].c, params, params.max_cycle_iters);
    CHECK(again.x_out == r.cycle_results[l].x_out);
    CHECK(again.iterations == r.cycle_results[l].iterations);
    CHECK(r.cycles[l].p0_norm == prev.p_out.norm());
  }
}

TEST_CASE("total iteration cap ends the run with BUDGET_EXCEEDED") {
  const BlockProblem p = generate(10, 100.0, 7).problem();
  SolverParams params = dp2();
  params.max_total_iters = 5;
  const SolveResult r = run(p, BlockVector(p.structure), params);
  CHECK(r.status == SolveStatus::BudgetExceeded);
  CHECK(r.total_iterations == 5);

  params.max_total_iters = 0;
  params.max_outer_cycles = 2;
  params.max_cycle_iters = 2;
  params.disable_failure_check = true;
  const SolveResult r2 = run(p, BlockVector(p.structure), params);
  CHECK(r2.status == SolveStatus::BudgetExceeded);
  CHECK(r2.cycles.size() == 2);
  CHECK(r2.total_iterations == 4);
}

TEST_CASE("looser tolerances never take more iterations") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const BlockProblem p = generate(8, 10.0, seed).problem();
    long previous = -1;
    for (double tol : {1e-3, 1e-5, 1e-7, 1e-9}) {
      const SolveResult r = run(p, BlockVector(p.structure), dp2(tol));
      REQUIRE(r.status == SolveStatus::Success);
      CHECK(r.total_iterations >= previous);
      previous = r.total_iterations;
    }
  }
}

TEST_CASE("cycle-start multiplier bound across a multi-cycle run") {
  const BlockProblem p = generate(10, 100.0, 11).problem();
  SolverParams params = dp2();
  params.max_cycle_iters = 4;
  params.c1 = 0.5;
  const SolveResult r = run(p, BlockVector(p.structure), params);
  const ConstantsReport base = base_constants(p, params);
  for (const auto& cyc : r.cycles) CHECK(cyc.p0_norm / cyc.c <= 2.0 * base.kappa1);
}

TEST_CASE("success implies the tolerance pair holds") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const BlockProblem p = generate(5, 3.0, seed).problem();
    const SolveResult r = run(p, BlockVector(p.structure), dp2(1e-6));
    REQUIRE(r.status == SolveStatus::Success);
    CHECK(r.v_norm <= 1e-6);
    CHECK(r.feas_norm <= 1e-6);
    CHECK(r.v_bar.norm() == doctest::Approx(r.v_norm));
  }
}
