#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dpadmm/block_vector.hpp"
#include "dpadmm/dynamic_admm.hpp"
#include "dpadmm/problem.hpp"

namespace dpadmm {

/// min -sum_t [alpha_t/2 ||x_t||^2 + <beta_t, x_t>] s.t. ||x_t||_inf <= gamma, sum_t A_t x_t = d.
struct BoxQuadraticSpec {
  std::vector<double> alpha;  ///< one per block, >= 0
  std::vector<Vector> beta;   ///< one per block; its length fixes n_t
  double gamma = 1.0;
  BlockOperator A;
  Vector d;
};

/// Builds the BlockProblem with closed-form oracles, the exact block solver
/// (when every A_t^*A_t is a multiple of I) and Slater data.
/// Throws std::invalid_argument on inconsistent data.
BlockProblem make_box_quadratic_problem(const BoxQuadraticSpec& spec);

/// One random instance of the three-block consensus family.
struct QpInstance {
  int n = 0;
  double gamma = 0.0;
  double alpha[2] = {0.0, 0.0};
  Vector beta[2];
  std::uint64_t seed = 0;

  BoxQuadraticSpec spec() const;
  BlockProblem problem() const { return make_box_quadratic_problem(spec()); }
};

/// Draws alpha_1, alpha_2, then the n entries of beta_1, then those of beta_2,
/// each uniform on [0, 1) from mt19937_64(seed) as (next >> 11) * 2^-53.
QpInstance generate(int n, double gamma, std::uint64_t seed);

struct VariantConfig {
  std::string name;
  double theta = 0.5;
  double chi = 1.0 / 18.0;
  double lambda = 0.5;
  double c1 = 1.0;
  WindowMode window_mode = WindowMode::FullAverage;
  bool strict = true;
  /// False: a single fixed-penalty cycle with the failure test disabled.
  bool adaptive = true;
  std::string note;

  SolverParams params(double tol, long iter_cap) const;

  static VariantConfig dp1();
  static VariantConfig dp2();
  static VariantConfig classic();
  /// "dp1", "dp2" or "classic"; throws std::invalid_argument otherwise.
  static VariantConfig by_name(const std::string& name);
};

struct GridCell {
  int n = 0;
  double gamma = 0.0;
};

struct ResultRow {
  std::string variant;
  int n = 0;
  double gamma = 0.0;
  std::uint64_t seed = 0;
  std::string status;  ///< SUCCESS, BUDGET_EXCEEDED or ERROR
  long iterations = 0;
  int cycles = 0;
  double runtime_ms = 0.0;
  double final_v_norm = 0.0;
  double final_feas_norm = 0.0;
  double certificate_residual = 0.0;
  std::vector<CycleSummary> cycle_breakdown;
  std::string error;

  bool operator==(const ResultRow& other) const;
};

struct ResultTable {
  std::vector<ResultRow> rows;
};

struct SuiteOptions {
  double tol = 1e-9;
  std::uint64_t seed = 7;
  long iter_cap = 100000;
  int jobs = 1;
};

/// Every (cell, variant) pair from x0 = 0; rows ordered cell-major, then by variant.
ResultTable run_suite(const std::vector<GridCell>& grid, const std::vector<VariantConfig>& variants,
                      const SuiteOptions& options);

/// Solves one instance with one variant and fills a row.
ResultRow run_cell(const QpInstance& instance, const VariantConfig& variant, double tol, long iter_cap);

enum class TableFormat { Csv, Json, Markdown };

TableFormat table_format_from_string(const std::string& name);

void emit(const ResultTable& table, TableFormat format, std::ostream& out);
std::string emit(const ResultTable& table, TableFormat format);

/// Inverse of the JSON emitter.
ResultTable parse_json_table(const std::string& text);

}  // namespace dpadmm
