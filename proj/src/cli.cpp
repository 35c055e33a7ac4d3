#include "dpadmm/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dpadmm/bench.hpp"
#include "dpadmm/diagnostics.hpp"
#include "dpadmm/problem_io.hpp"

namespace dpadmm {

namespace {

using json = nlohmann::json;

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Overrides {
  std::optional<double> tol, rho, eta, lambda, theta, chi, c1, sigma;
  std::optional<int> max_cycle_iters, max_outer_cycles;
  std::optional<long> max_total_iters;
  std::optional<std::string> window_mode;
  bool no_strict = false;
  bool inexact = false;

  void attach(CLI::App& app) {
    app.add_option("--tol", tol, "Sets both rho and eta");
    app.add_option("--rho", rho, "Stationarity tolerance");
    app.add_option("--eta", eta, "Feasibility tolerance");
    app.add_option("--lambda", lambda, "Prox stepsize");
    app.add_option("--theta", theta, "Dampening parameter");
    app.add_option("--chi", chi, "Multiplier stepsize factor");
    app.add_option("--c1", c1, "Initial penalty");
    app.add_option("--max-cycle-iters", max_cycle_iters, "Iteration cap per static cycle");
    app.add_option("--max-outer-cycles", max_outer_cycles, "Cap on penalty doublings");
    app.add_option("--max-total-iters", max_total_iters, "Iteration cap over all cycles (0 = none)");
    app.add_option("--window-mode", window_mode, "full_average or half_window");
    app.add_flag("--no-strict", no_strict, "Downgrade theory-range parameter checks to warnings");
    app.add_flag("--inexact", inexact, "Use the inexact inner solver");
    app.add_option("--sigma", sigma, "Inexactness factor of the inner solver");
  }

  void apply(SolverParams& p) const {
    if (tol) p.rho = p.eta = *tol;
    if (rho) p.rho = *rho;
    if (eta) p.eta = *eta;
    if (lambda) p.lambda = *lambda;
    if (theta) p.theta = *theta;
    if (chi) p.chi = *chi;
    if (c1) p.c1 = *c1;
    if (sigma) p.inner.sigma = *sigma;
    if (max_cycle_iters) p.max_cycle_iters = *max_cycle_iters;
    if (max_outer_cycles) p.max_outer_cycles = *max_outer_cycles;
    if (max_total_iters) p.max_total_iters = *max_total_iters;
    if (window_mode) {
      try {
        p.window_mode = window_mode_from_string(*window_mode);
      } catch (const std::invalid_argument& e) {
        throw InputError(std::string("--window-mode: ") + e.what());
      }
    }
    if (no_strict) p.strict_params = false;
    if (inexact) p.force_inexact = true;
  }
};

std::filesystem::path resolve_output(const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_relative()) {
    if (const char* dir = std::getenv("DPADMM_OUTPUT_DIR"); dir != nullptr && *dir != '\0') {
      return std::filesystem::path(dir) / p;
    }
  }
  return p;
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  const auto target = resolve_output(path);
  if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
  std::ofstream file(target);
  if (!file) throw InputError("--output: cannot write '" + target.string() + "'");
  file << text;
}

void check_params(const SolverParams& params, int num_blocks, double max_m, std::ostream& err) {
  const ValidationReport report = validate_params(params, num_blocks, max_m);
  if (!report.ok()) throw InputError("invalid parameters\n" + report.summary());
  for (const auto& w : report.warnings) err << "warning: " << w.field << ": " << w.message << '\n';
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json constants_json(const ConstantsReport& r) {
  json j;
  auto put = [&](const char* name, double x) { j[name] = finite_or_null(x); };
  j["B"] = r.B;
  put("lambda", r.lambda);
  put("theta", r.theta);
  put("chi", r.chi);
  put("M", r.M);
  put("m", r.m);
  put("Delta_phi", r.Delta_phi);
  put("D_dagger", r.D_dagger);
  put("d_dagger", r.d_dagger);
  put("G_f", r.G_f);
  put("K_h", r.K_h);
  put("norm_A", r.norm_A);
  put("sigma_A_plus", r.sigma_A_plus);
  put("norm_A_dagger", r.norm_A_dagger);
  put("kappa0", r.kappa0);
  put("kappa1", r.kappa1);
  put("kappa2", r.kappa2);
  put("kappa3", r.kappa3);
  put("kappa4", r.kappa4);
  put("kappa5", r.kappa5);
  put("kappa6", r.kappa6);
  put("a_theta", r.a_theta);
  put("b_theta", r.b_theta);
  put("gamma_theta", r.gamma_theta);
  put("c_lower", r.c_lower);
  put("kappa_tilde0", r.kappa_tilde0);
  put("kappa_tilde1", r.kappa_tilde1);
  put("kappa_tilde2", r.kappa_tilde2);
  put("R", r.R);
  put("xi0", r.xi0);
  put("xi1", r.xi1);
  put("c", r.c);
  put("rho", r.rho);
  put("eta", r.eta);
  put("T_c", r.T_c);
  put("c_hat", r.c_hat);
  put("T1", r.T1);
  put("E0", r.E0);
  put("E1", r.E1);
  put("dyn_bound", r.dyn_bound);
  return j;
}

json lemma_json(const LemmaReport& report) {
  json checks = json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"applicable", c.applicable},
                      {"has_warnings", c.has_warnings},
                      {"inexact_violations", c.inexact_violations},
                      {"checked", c.checked},
                      {"violations", c.violations},
                      {"worst_margin", finite_or_null(c.worst_margin)},
                      {"passed", c.passed()},
                      {"note", c.note}});
  }
  return {{"passed", report.passed()}, {"checks", checks}};
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int run_solve(const std::string& path, const Overrides& ov, const std::string& output, const std::string& telemetry,
              std::ostream& out, std::ostream& err) {
  const BoxQuadraticSpec spec = load_problem_json(path);
  BlockProblem problem;
  try {
    problem = make_box_quadratic_problem(spec);
  } catch (const std::invalid_argument& e) {
    throw InputError(path + ": " + e.what());
  }
  SolverParams params;
  ov.apply(params);
  check_params(params, problem.num_blocks(), problem.max_m(), err);

  const SolveResult result = run(problem, BlockVector(problem.structure), params);
  write_output(output, solve_result_json(result) + "\n", out);
  if (!telemetry.empty()) {
    std::ostringstream lines;
    write_telemetry_jsonl(result, lines);
    write_output(telemetry, lines.str(), out);
  }
  return result.status == SolveStatus::Success ? kExitOk : kExitBudgetExceeded;
}

int run_bench(const std::vector<int>& ns, const std::vector<double>& gammas, const std::string& variant_list,
              const SuiteOptions& options, const std::string& format, const std::string& output, std::ostream& out) {
  TableFormat fmt;
  try {
    fmt = table_format_from_string(format);
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("--format: ") + e.what());
  }
  std::vector<VariantConfig> variants;
  for (const auto& name : split_list(variant_list)) {
    try {
      variants.push_back(VariantConfig::by_name(name));
    } catch (const std::invalid_argument& e) {
      throw InputError(std::string("--variants: ") + e.what());
    }
  }
  if (variants.empty()) throw InputError("--variants: no variant given");
  for (int n : ns) {
    if (n < 1) throw InputError("--n: block size must be at least 1");
  }
  for (double g : gammas) {
    if (!(g > 0.0)) throw InputError("--gamma: box radius must be positive");
  }
  if (!(options.tol > 0.0)) throw InputError("--tol: must be positive");
  if (options.iter_cap < 1) throw InputError("--cap: must be at least 1");

  std::vector<GridCell> grid;
  for (int n : ns) {
    for (double g : gammas) grid.push_back({n, g});
  }
  const ResultTable table = run_suite(grid, variants, options);
  write_output(output, emit(table, fmt), out);
  return kExitOk;
}

int run_check(int n, double gamma, std::uint64_t seed, int probe_iters, const Overrides& ov, std::ostream& out,
              std::ostream& err) {
  if (n < 1) throw InputError("--n: block size must be at least 1");
  if (!(gamma > 0.0)) throw InputError("--gamma: box radius must be positive");
  if (probe_iters < 1) throw InputError("--probe-iters: must be at least 1");
  const QpInstance instance = generate(n, gamma, seed);
  const BlockProblem problem = instance.problem();
  SolverParams params;
  ov.apply(params);
  params.max_total_iters = params.max_total_iters > 0 ? std::min<long>(params.max_total_iters, probe_iters)
                                                      : probe_iters;
  params.trace_vectors = true;
  check_params(params, problem.num_blocks(), problem.max_m(), err);

  const SolveResult result = run(problem, BlockVector(problem.structure), params);
  const ConstantsReport base = base_constants(problem, params);
  const ConstantsReport constants = compute_constants(problem, params, params.c1, params.c1, 0.0);
  const LemmaReport report = check_lemma_suite(result, base);

  json j = {{"instance", {{"n", n}, {"gamma", gamma}, {"seed", seed}}},
            {"probe", {{"status", to_string(result.status)},
                       {"iterations", result.total_iterations},
                       {"cycles", result.cycles.size()}}},
            {"constants", constants_json(constants)},
            {"lemmas", lemma_json(report)}};
  out << j.dump(2) << '\n';
  return report.passed() ? kExitOk : kExitInputError;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dampened proximal ADMM solver and benchmark harness", "dpadmm"};
  app.require_subcommand(1, 1);

  auto* solve = app.add_subcommand("solve", "Solve a JSON quadratic-over-box problem");
  std::string problem_path;
  std::string solve_output;
  std::string telemetry_path;
  Overrides solve_ov;
  solve->add_option("problem", problem_path, "Problem file")->required();
  solve->add_option("-o,--output", solve_output, "Result JSON path (default stdout)");
  solve->add_option("--telemetry", telemetry_path, "Per-iteration JSON-lines path");
  solve_ov.attach(*solve);

  auto* bench = app.add_subcommand("bench", "Run a benchmark grid on the three-block family");
  std::vector<int> bench_n{10};
  std::vector<double> bench_gamma{100.0};
  std::string variant_list = "dp1,dp2";
  SuiteOptions suite;
  std::string format = "csv";
  std::string bench_output;
  bench->add_option("--n", bench_n, "Block sizes")->delimiter(',');
  bench->add_option("--gamma", bench_gamma, "Box radii")->delimiter(',');
  bench->add_option("--variants", variant_list, "Comma list of dp1, dp2, classic");
  bench->add_option("--tol", suite.tol, "rho = eta");
  bench->add_option("--seed", suite.seed, "Instance seed");
  bench->add_option("--cap", suite.iter_cap, "Iteration cap per run");
  bench->add_option("--jobs", suite.jobs, "Parallel cells");
  bench->add_option("--format", format, "csv, json or markdown");
  bench->add_option("-o,--output", bench_output, "Table path (default stdout)");

  auto* check = app.add_subcommand("check", "Print constants and the lemma report for a probe run");
  int check_n = 4;
  double check_gamma = 1.0;
  std::uint64_t check_seed = 1;
  int probe_iters = 2000;
  Overrides check_ov;
  check->add_option("--n", check_n, "Block size");
  check->add_option("--gamma", check_gamma, "Box radius");
  check->add_option("--seed", check_seed, "Instance seed");
  check->add_option("--probe-iters", probe_iters, "Iteration cap of the probe run");
  check_ov.attach(*check);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }

  try {
    if (solve->parsed()) return run_solve(problem_path, solve_ov, solve_output, telemetry_path, out, err);
    if (bench->parsed()) return run_bench(bench_n, bench_gamma, variant_list, suite, format, bench_output, out);
    if (check->parsed()) return run_check(check_n, check_gamma, check_seed, probe_iters, check_ov, out, err);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const ProblemFormatError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace dpadmm
