#include "dpadmm/bench.hpp"

#include <algorithm>
#include <chrono>
#include <climits>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <memory>
#include <random>
#include <sstream>
#include <stdexcept>

#include <Eigen/SVD>
#include <json.hpp>

#include "dpadmm/diagnostics.hpp"
#include "dpadmm/inner_solvers.hpp"

namespace dpadmm {

namespace {

using json = nlohmann::json;

double clamp_scalar(double v, double r) { return std::min(std::max(v, -r), r); }

Vector clip(const Vector& v, double r) { return v.unaryExpr([r](double x) { return clamp_scalar(x, r); }); }

struct Singulars {
  double largest = 0.0;
  double smallest_positive = 0.0;
};

// Stacked-identity blocks sharing one block size: A A^* = (W W^T) kron I, so
// the singular values of A are those of the small weight matrix W.
std::optional<Eigen::MatrixXd> stacked_weight_matrix(const BlockOperator& A) {
  const int B = A.num_blocks();
  int rows = -1;
  int dim = -1;
  Eigen::MatrixXd W;
  for (int t = 0; t < B; ++t) {
    const auto* s = dynamic_cast<const StackedIdentityOperator*>(&A.block(t));
    if (s == nullptr) return std::nullopt;
    const int r = static_cast<int>(s->weights().size());
    if (t == 0) {
      rows = r;
      dim = s->cols();
      W.resize(rows, B);
    } else if (r != rows || s->cols() != dim) {
      return std::nullopt;
    }
    for (int i = 0; i < r; ++i) W(i, t) = s->weights()[static_cast<std::size_t>(i)];
  }
  return W;
}

Singulars singular_values(const BlockOperator& A) {
  Eigen::MatrixXd M;
  if (auto W = stacked_weight_matrix(A)) {
    M = *W;
  } else {
    M = A.to_dense();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  const Vector s = svd.singularValues();
  Singulars out;
  if (s.size() == 0) return out;
  out.largest = s(0);
  const double cutoff = 1e-12 * std::max(1.0, s(0));
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > cutoff) out.smallest_positive = s(i);
  }
  return out;
}

// Extremes of g(u) = -alpha/2 u^2 - beta u over [-r, r].
std::pair<double, double> coordinate_range(double alpha, double beta, double r) {
  auto g = [&](double u) { return -0.5 * alpha * u * u - beta * u; };
  double lo = std::min(g(-r), g(r));
  double hi = std::max(g(-r), g(r));
  if (alpha > 0.0) {
    const double vertex = -beta / alpha;
    if (std::abs(vertex) <= r) {
      lo = std::min(lo, g(vertex));
      hi = std::max(hi, g(vertex));
    }
  }
  return {lo, hi};
}

std::optional<SlaterData> box_slater_data(const BoxQuadraticSpec& spec, const BlockStructure& structure) {
  BlockVector z(structure);
  const double lsq = least_squares_residual(spec.A, spec.d, &z);
  if (lsq > 1e-10 * (1.0 + spec.d.norm())) return std::nullopt;

  double z_inf = 0.0;
  double D_sq = 0.0;
  double G_sq = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  const double r = spec.gamma;
  for (int t = 0; t < structure.num_blocks(); ++t) {
    const auto ts = static_cast<std::size_t>(t);
    const double a = spec.alpha[ts];
    for (Eigen::Index i = 0; i < z[t].size(); ++i) {
      const double zi = z[t](i);
      const double b = spec.beta[ts](i);
      z_inf = std::max(z_inf, std::abs(zi));
      D_sq += (r + std::abs(zi)) * (r + std::abs(zi));
      const double g = std::max(std::abs(a * r + b), std::abs(a * r - b));
      G_sq += g * g;
      const auto [l, h] = coordinate_range(a, b, r);
      lo += l;
      hi += h;
    }
  }
  if (!(r - z_inf > 0.0)) return std::nullopt;

  const Singulars sv = singular_values(spec.A);
  SlaterData s;
  s.z_dagger = std::move(z);
  s.d_dagger = r - z_inf;
  s.D_dagger = std::sqrt(D_sq);
  s.G_f = std::sqrt(G_sq);
  s.K_h = 0.0;
  s.phi_lo = lo;
  s.phi_hi = hi;
  s.norm_A = sv.largest;
  s.sigma_A_plus = sv.smallest_positive;
  s.norm_A_dagger = spec.A.dagger_norm();
  return s;
}

double uniform01(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

std::string format_real(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

std::string format_gamma(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

json row_to_json(const ResultRow& r) {
  json cycles = json::array();
  for (const auto& c : r.cycle_breakdown) {
    cycles.push_back({{"c", c.c}, {"iterations", c.iterations}, {"status", to_string(c.status)}, {"p0_norm", c.p0_norm}});
  }
  json j = {{"variant", r.variant},
            {"n", r.n},
            {"gamma", r.gamma},
            {"seed", r.seed},
            {"status", r.status},
            {"iterations", r.iterations},
            {"cycles", r.cycles},
            {"runtime_ms", r.runtime_ms},
            {"final_v_norm", r.final_v_norm},
            {"final_feas_norm", r.final_feas_norm},
            {"certificate_residual", r.certificate_residual},
            {"cycle_breakdown", cycles}};
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

CycleStatus cycle_status_from_string(const std::string& s) {
  if (s == "SUCCESS") return CycleStatus::Success;
  if (s == "PENALTY_TOO_SMALL") return CycleStatus::PenaltyTooSmall;
  if (s == "BUDGET_EXCEEDED") return CycleStatus::BudgetExceeded;
  throw std::invalid_argument("unknown cycle status '" + s + "'");
}

ResultRow row_from_json(const json& j) {
  ResultRow r;
  r.variant = j.at("variant").get<std::string>();
  r.n = j.at("n").get<int>();
  r.gamma = j.at("gamma").get<double>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.status = j.at("status").get<std::string>();
  r.iterations = j.at("iterations").get<long>();
  r.cycles = j.at("cycles").get<int>();
  r.runtime_ms = j.at("runtime_ms").get<double>();
  r.final_v_norm = j.at("final_v_norm").get<double>();
  r.final_feas_norm = j.at("final_feas_norm").get<double>();
  r.certificate_residual = j.value("certificate_residual", 0.0);
  r.error = j.value("error", std::string());
  if (j.contains("cycle_breakdown")) {
    for (const auto& c : j.at("cycle_breakdown")) {
      r.cycle_breakdown.push_back({c.at("c").get<double>(), c.at("iterations").get<int>(),
                                   cycle_status_from_string(c.at("status").get<std::string>()),
                                   c.at("p0_norm").get<double>()});
    }
  }
  return r;
}

void emit_csv(const ResultTable& table, std::ostream& out) {
  out << "variant,n,gamma,seed,status,iterations,cycles,runtime_ms,final_v_norm,final_feas_norm\n";
  for (const auto& r : table.rows) {
    out << r.variant << ',' << r.n << ',' << format_gamma(r.gamma) << ',' << r.seed << ',' << r.status << ','
        << r.iterations << ',' << r.cycles << ',' << std::fixed << std::setprecision(3) << r.runtime_ms
        << std::defaultfloat << ',' << format_real(r.final_v_norm) << ',' << format_real(r.final_feas_norm) << '\n';
  }
}

void emit_markdown(const ResultTable& table, std::ostream& out) {
  std::vector<std::string> variants;
  std::vector<std::pair<int, double>> cells;
  std::map<std::pair<std::pair<int, double>, std::string>, const ResultRow*> index;
  for (const auto& r : table.rows) {
    if (std::find(variants.begin(), variants.end(), r.variant) == variants.end()) variants.push_back(r.variant);
    const std::pair<int, double> cell{r.n, r.gamma};
    if (std::find(cells.begin(), cells.end(), cell) == cells.end()) cells.push_back(cell);
    index[{cell, r.variant}] = &r;
  }

  out << "| n | gamma |";
  for (const auto& v : variants) out << ' ' << v << " iter |";
  for (const auto& v : variants) out << ' ' << v << " time (s) |";
  out << "\n|---:|---:|";
  for (std::size_t i = 0; i < 2 * variants.size(); ++i) out << "---:|";
  out << '\n';

  for (const auto& cell : cells) {
    out << "| " << cell.first << " | " << format_gamma(cell.second) << " |";
    for (const auto& v : variants) {
      auto it = index.find({cell, v});
      if (it == index.end() || it->second->status != "SUCCESS") {
        out << " - |";
      } else {
        out << ' ' << it->second->iterations << " |";
      }
    }
    for (const auto& v : variants) {
      auto it = index.find({cell, v});
      if (it == index.end() || it->second->status != "SUCCESS") {
        out << " - |";
      } else {
        out << ' ' << std::fixed << std::setprecision(3) << it->second->runtime_ms / 1000.0 << std::defaultfloat
            << " |";
      }
    }
    out << '\n';
  }
}

}  // namespace

BlockProblem make_box_quadratic_problem(const BoxQuadraticSpec& spec) {
  const int B = spec.A.num_blocks();
  if (B < 1) throw std::invalid_argument("operator A has no blocks");
  if (static_cast<int>(spec.alpha.size()) != B) throw std::invalid_argument("alpha needs one entry per block");
  if (static_cast<int>(spec.beta.size()) != B) throw std::invalid_argument("beta needs one vector per block");
  if (!(spec.gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  if (spec.d.size() != spec.A.rows()) throw DimensionError("d length differs from the rows of A");

  std::vector<int> dims;
  for (int t = 0; t < B; ++t) {
    const auto ts = static_cast<std::size_t>(t);
    if (spec.alpha[ts] < 0.0 || !std::isfinite(spec.alpha[ts])) {
      throw std::invalid_argument("alpha entries must be finite and nonnegative");
    }
    if (spec.A.block(t).cols() != spec.beta[ts].size()) {
      throw DimensionError("beta[" + std::to_string(t) + "] length differs from the columns of A_" +
                           std::to_string(t + 1));
    }
    dims.push_back(static_cast<int>(spec.beta[ts].size()));
  }

  auto data = std::make_shared<const BoxQuadraticSpec>(spec);
  const double gamma = spec.gamma;

  BlockProblem p;
  p.structure = BlockStructure(dims, static_cast<int>(spec.A.rows()));
  p.A = spec.A;
  p.d = spec.d;
  p.grad_block = [data](int t, const BlockVector&, const Vector& u) -> Vector {
    const auto ts = static_cast<std::size_t>(t);
    return -data->alpha[ts] * u - data->beta[ts];
  };
  p.phi_smooth = [data](const BlockVector& x) {
    double f = 0.0;
    for (int t = 0; t < x.num_blocks(); ++t) {
      const auto ts = static_cast<std::size_t>(t);
      f -= 0.5 * data->alpha[ts] * x[t].squaredNorm() + data->beta[ts].dot(x[t]);
    }
    return f;
  };
  p.h_value = [gamma](int, const Vector& u) {
    return u.size() == 0 || u.cwiseAbs().maxCoeff() <= gamma ? 0.0 : std::numeric_limits<double>::infinity();
  };
  p.prox_h = [gamma](int, const Vector& v, double) { return clip(v, gamma); };

  bool scalar_gram = true;
  for (int t = 0; t < B; ++t) scalar_gram = scalar_gram && spec.A.block(t).gram_scale().has_value();
  if (scalar_gram) {
    p.prox_block = [data](const BlockSubproblem& sub) {
      const auto ts = static_cast<std::size_t>(sub.t);
      return solve_exact_diag(sub, data->alpha[ts], data->beta[ts], data->gamma, *sub.A_t->gram_scale());
    };
  }

  p.m = spec.alpha;
  p.M.assign(static_cast<std::size_t>(std::max(B - 1, 0)), 0.0);
  p.slater = box_slater_data(spec, p.structure);
  return p;
}

BoxQuadraticSpec QpInstance::spec() const {
  BoxQuadraticSpec s;
  s.alpha = {alpha[0], alpha[1], 0.0};
  s.beta = {beta[0], beta[1], Vector::Zero(n)};
  s.gamma = gamma;
  s.A = make_consensus3(n);
  s.d = Vector::Zero(2 * n);
  return s;
}

QpInstance generate(int n, double gamma, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  std::mt19937_64 gen(seed);
  QpInstance q;
  q.n = n;
  q.gamma = gamma;
  q.seed = seed;
  q.alpha[0] = uniform01(gen);
  q.alpha[1] = uniform01(gen);
  for (auto& b : q.beta) {
    b.resize(n);
    for (int i = 0; i < n; ++i) b(i) = uniform01(gen);
  }
  return q;
}

SolverParams VariantConfig::params(double tol, long iter_cap) const {
  SolverParams p;
  p.theta = theta;
  p.chi = chi;
  p.lambda = lambda;
  p.c1 = c1;
  p.rho = tol;
  p.eta = tol;
  p.window_mode = window_mode;
  p.strict_params = strict;
  p.max_cycle_iters = static_cast<int>(std::min<long>(iter_cap, INT_MAX));
  p.max_total_iters = iter_cap;
  if (!adaptive) {
    p.max_outer_cycles = 1;
    p.disable_failure_check = true;
  }
  return p;
}

VariantConfig VariantConfig::dp1() {
  VariantConfig v;
  v.name = "DP1";
  v.theta = 0.0;
  v.chi = 1.0;
  v.strict = false;
  v.note = "theta = 0 lies outside the analysed range; run without the strict parameter gate";
  return v;
}

VariantConfig VariantConfig::dp2() {
  VariantConfig v;
  v.name = "DP2";
  v.theta = 0.5;
  v.chi = 1.0 / 18.0;
  v.note = "(chi, theta) coupling condition holds with equality for B = 3";
  return v;
}

VariantConfig VariantConfig::classic() {
  VariantConfig v;
  v.name = "CLASSIC";
  v.theta = 0.0;
  v.chi = 1.0;
  v.c1 = 10.0;
  v.strict = false;
  v.adaptive = false;
  v.note = "undampened proximal ADMM, fixed penalty c = 10, no penalty-too-small test";
  return v;
}

VariantConfig VariantConfig::by_name(const std::string& name) {
  std::string lower = name;
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char ch) { return std::tolower(ch); });
  if (lower == "dp1") return dp1();
  if (lower == "dp2") return dp2();
  if (lower == "classic") return classic();
  throw std::invalid_argument("unknown variant '" + name + "' (expected dp1, dp2 or classic)");
}

bool ResultRow::operator==(const ResultRow& o) const {
  if (cycle_breakdown.size() != o.cycle_breakdown.size()) return false;
  for (std::size_t i = 0; i < cycle_breakdown.size(); ++i) {
    const auto& a = cycle_breakdown[i];
    const auto& b = o.cycle_breakdown[i];
    if (a.c != b.c || a.iterations != b.iterations || a.status != b.status || a.p0_norm != b.p0_norm) return false;
  }
  return variant == o.variant && n == o.n && gamma == o.gamma && seed == o.seed && status == o.status &&
         iterations == o.iterations && cycles == o.cycles && runtime_ms == o.runtime_ms &&
         final_v_norm == o.final_v_norm && final_feas_norm == o.final_feas_norm &&
         certificate_residual == o.certificate_residual && error == o.error;
}

ResultRow run_cell(const QpInstance& instance, const VariantConfig& variant, double tol, long iter_cap) {
  ResultRow row;
  row.variant = variant.name;
  row.n = instance.n;
  row.gamma = instance.gamma;
  row.seed = instance.seed;
  try {
    const BlockProblem problem = instance.problem();
    const SolverParams params = variant.params(tol, iter_cap);
    const BlockVector z0(problem.structure);

    const auto start = std::chrono::steady_clock::now();
    const SolveResult res = run(problem, z0, params);
    const auto stop = std::chrono::steady_clock::now();

    row.runtime_ms = std::chrono::duration<double, std::milli>(stop - start).count();
    row.status = to_string(res.status);
    row.iterations = res.total_iterations;
    row.cycles = static_cast<int>(res.cycles.size());
    row.final_v_norm = res.v_norm;
    row.final_feas_norm = res.feas_norm;
    row.cycle_breakdown = res.cycles;
    if (res.status == SolveStatus::Success) {
      row.certificate_residual = stationarity_certificate_residual(problem, res.z_bar, res.q_bar, res.v_bar);
    }
  } catch (const std::exception& e) {
    row.status = "ERROR";
    row.error = e.what();
  }
  return row;
}

ResultTable run_suite(const std::vector<GridCell>& grid, const std::vector<VariantConfig>& variants,
                      const SuiteOptions& options) {
  const std::size_t V = variants.size();
  const auto total = static_cast<long>(grid.size() * V);
  ResultTable table;
  table.rows.resize(static_cast<std::size_t>(total));
  const int jobs = std::max(1, options.jobs);

#pragma omp parallel for schedule(dynamic) num_threads(jobs) if (jobs > 1)
  for (long idx = 0; idx < total; ++idx) {
    const auto i = static_cast<std::size_t>(idx);
    const GridCell& cell = grid[i / V];
    const VariantConfig& variant = variants[i % V];
    ResultRow row;
    try {
      const QpInstance instance = generate(cell.n, cell.gamma, options.seed);
      row = run_cell(instance, variant, options.tol, options.iter_cap);
    } catch (const std::exception& e) {
      row.variant = variant.name;
      row.n = cell.n;
      row.gamma = cell.gamma;
      row.seed = options.seed;
      row.status = "ERROR";
      row.error = e.what();
    }
    table.rows[i] = std::move(row);
  }
  return table;
}

TableFormat table_format_from_string(const std::string& name) {
  std::string lower = name;
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char ch) { return std::tolower(ch); });
  if (lower == "csv") return TableFormat::Csv;
  if (lower == "json") return TableFormat::Json;
  if (lower == "markdown" || lower == "md") return TableFormat::Markdown;
  throw std::invalid_argument("unsupported table format '" + name + "' (expected csv, json or markdown)");
}

void emit(const ResultTable& table, TableFormat format, std::ostream& out) {
  switch (format) {
    case TableFormat::Csv:
      emit_csv(table, out);
      return;
    case TableFormat::Json: {
      json rows = json::array();
      for (const auto& r : table.rows) rows.push_back(row_to_json(r));
      out << json{{"rows", rows}}.dump(2) << '\n';
      return;
    }
    case TableFormat::Markdown:
      emit_markdown(table, out);
      return;
  }
  throw std::invalid_argument("unsupported table format");
}

std::string emit(const ResultTable& table, TableFormat format) {
  std::ostringstream os;
  emit(table, format, os);
  return os.str();
}

ResultTable parse_json_table(const std::string& text) {
  const json j = json::parse(text);
  ResultTable table;
  for (const auto& r : j.at("rows")) table.rows.push_back(row_from_json(r));
  return table;
}

}  // namespace dpadmm
