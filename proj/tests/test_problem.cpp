#include <doctest.h>

#include "dpadmm/bench.hpp"
#include "dpadmm/problem.hpp"
#include "test_problems.hpp"

using namespace dpadmm;
using testing_problems::scalar_problem;

namespace {

BlockVector scalar(double x) { return BlockVector(std::vector<Vector>{Vector::Constant(1, x)}); }

}  // namespace

TEST_CASE("dampened Lagrangian on a 1-D instance") {
  // f = x^2 (q = 2), A = 1, d = 0, x = 2, p = 3, theta = 1/2, c = 4:
  // 4 + 0.5 * 3 * 2 + 2 * 4 = 15.
  const BlockProblem p = scalar_problem(2.0, 1.0, 0.0);
  CHECK(eval_dal(p, scalar(2.0), Vector::Constant(1, 3.0), 4.0, 0.5) == doctest::Approx(15.0));
}

TEST_CASE("dampened Lagrangian special cases") {
  const BlockProblem p = scalar_problem(2.0, 1.0, 0.5);
  const Vector mult = Vector::Constant(1, -7.0);
  // theta = 1 drops the linear term: 1 + (3/2) * 0.25.
  CHECK(eval_dal(p, scalar(1.0), mult, 3.0, 1.0) == doctest::Approx(1.0 + 1.5 * 0.25));
  // Feasible x returns phi(x) for any p, c, theta.
  CHECK(eval_dal(p, scalar(0.5), mult, 9.0, 0.2) == doctest::Approx(0.25));
  CHECK(eval_phi(p, scalar(0.5)) == doctest::Approx(0.25));
}

TEST_CASE("dampened Lagrangian is +inf outside dom h") {
  const BlockProblem p = scalar_problem(1.0, 1.0, 0.0, 1.0);
  CHECK(std::isinf(eval_dal(p, scalar(2.0), Vector::Zero(1), 1.0, 0.5)));
}

TEST_CASE("constraint residual of the three-block family") {
  const BlockProblem p = generate(2, 1.0, 1).problem();
  BlockVector x(p.structure);
  x[0] = Vector::Unit(2, 0);
  Vector expected(4);
  expected << 1, 0, 0, 0;
  CHECK(constraint_residual(p, x) == expected);

  x[1] = x[0];
  x[2] = x[0];
  CHECK(constraint_residual(p, x).norm() == 0.0);
  CHECK(constraint_residual(p, p.slater->z_dagger).norm() == 0.0);
}

TEST_CASE("parameter gate examples") {
  SolverParams s;
  s.theta = 0.5;
  s.chi = 1.0 / 18.0;
  CHECK(chi_theta_lhs(s.chi, s.theta, 3) == doctest::Approx(0.25));
  CHECK(validate_params(s, 3, 1.0).ok());

  s.theta = 1.0;
  s.chi = 1.0;
  CHECK(chi_theta_lhs(1.0, 1.0, 3) == 0.0);
  CHECK(validate_params(s, 3, 1.0).ok());

  s.theta = 0.0;
  s.chi = 1.0;
  CHECK(chi_theta_lhs(1.0, 0.0, 3) == doctest::Approx(12.0));
  const ValidationReport strict = validate_params(s, 3, 1.0);
  CHECK_FALSE(strict.ok());
  CHECK(strict.summary().find("chi") != std::string::npos);

  s.strict_params = false;
  const ValidationReport relaxed = validate_params(s, 3, 1.0);
  CHECK(relaxed.ok());
  CHECK_FALSE(relaxed.warnings.empty());
}

TEST_CASE("parameter gate rejects out-of-range scalars in any mode") {
  SolverParams s;
  s.strict_params = false;
  s.lambda = 0.6;
  CHECK_FALSE(validate_params(s, 3, 1.0).ok());  // 1/(2m) = 0.5
  s.lambda = 0.5;
  CHECK(validate_params(s, 3, 1.0).ok());
  s.rho = 0.0;
  CHECK_FALSE(validate_params(s, 3, 1.0).ok());
  s.rho = 1e-9;
  s.inner.sigma = 1.0;
  CHECK_FALSE(validate_params(s, 3, 1.0).ok());
}

TEST_CASE("max admissible chi sits on the coupling boundary") {
  for (double theta : {0.1, 0.3, 0.5, 0.7}) {
    const double chi = max_admissible_chi(theta, 3);
    CHECK(chi_theta_condition_holds(chi, theta, 3));
    CHECK_FALSE(chi_theta_condition_holds(chi * 1.001, theta, 3));
  }
  CHECK(max_admissible_chi(0.5, 3) == doctest::Approx(1.0 / 18.0));
  CHECK(max_admissible_chi(0.9, 3) == 1.0);
}

TEST_CASE("problem validation") {
  BlockProblem ok = generate(3, 2.0, 5).problem();
  CHECK_NOTHROW(ok.validate());

  BlockProblem off_image = scalar_problem(1.0, 1.0, 0.0);
  Eigen::MatrixXd tall = Eigen::MatrixXd::Zero(2, 1);
  tall(0, 0) = 1.0;
  off_image.A = BlockOperator({std::make_shared<DenseOperator>(tall)});
  off_image.structure = BlockStructure({1}, 2);
  off_image.d = Vector::Unit(2, 1);
  CHECK_THROWS_AS(off_image.validate(), std::invalid_argument);

  BlockProblem bad_dims = scalar_problem(1.0, 1.0, 0.0);
  bad_dims.d = Vector::Zero(3);
  CHECK_THROWS_AS(bad_dims.validate(), DimensionError);
}

TEST_CASE("window mode names") {
  CHECK(window_mode_from_string("half_window") == WindowMode::HalfWindow);
  CHECK(window_mode_from_string("full") == WindowMode::FullAverage);
  CHECK(std::string(to_string(WindowMode::FullAverage)) == "full_average");
  CHECK_THROWS_AS(window_mode_from_string("quarter"), std::invalid_argument);
}
