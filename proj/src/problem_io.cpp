#include "dpadmm/problem_io.hpp"

#include <cmath>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace dpadmm {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& source, const std::string& field, const std::string& what) {
  throw ProblemFormatError(source + ": field '" + field + "': " + what);
}

double real_at(const json& j, const std::string& source, const std::string& field) {
  if (!j.is_number()) fail(source, field, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) fail(source, field, "must be finite");
  return x;
}

Vector vector_at(const json& j, const std::string& source, const std::string& field) {
  if (!j.is_array()) fail(source, field, "expected an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = real_at(j[i], source, field + "[" + std::to_string(i) + "]");
  }
  return v;
}

Eigen::MatrixXd matrix_at(const json& j, const std::string& source, const std::string& field) {
  if (!j.is_array() || j.empty()) fail(source, field, "expected a nonempty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) fail(source, field + "[0]", "expected a nonempty row");
  Eigen::MatrixXd M(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    const std::string row_field = field + "[" + std::to_string(r) + "]";
    const Vector row = vector_at(j[r], source, row_field);
    if (static_cast<std::size_t>(row.size()) != cols) {
      fail(source, row_field, "expected " + std::to_string(cols) + " entries");
    }
    M.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  return M;
}

}  // namespace

BoxQuadraticSpec parse_problem_json(const std::string& text, const std::string& source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ProblemFormatError(source + ": invalid JSON: " + e.what());
  }
  if (!j.is_object()) throw ProblemFormatError(source + ": top level must be an object");
  for (const char* key : {"gamma", "alpha", "beta", "A"}) {
    if (!j.contains(key)) fail(source, key, "missing");
  }

  BoxQuadraticSpec spec;
  spec.gamma = real_at(j["gamma"], source, "gamma");
  if (!(spec.gamma > 0.0)) fail(source, "gamma", "must be positive");

  const Vector alpha = vector_at(j["alpha"], source, "alpha");
  const auto B = static_cast<std::size_t>(alpha.size());
  if (B == 0) fail(source, "alpha", "needs one entry per block");
  for (std::size_t t = 0; t < B; ++t) {
    if (alpha(static_cast<Eigen::Index>(t)) < 0.0) fail(source, "alpha[" + std::to_string(t) + "]", "must be >= 0");
    spec.alpha.push_back(alpha(static_cast<Eigen::Index>(t)));
  }

  const json& beta = j["beta"];
  if (!beta.is_array() || beta.size() != B) fail(source, "beta", "expected " + std::to_string(B) + " vectors");
  for (std::size_t t = 0; t < B; ++t) {
    Vector b = vector_at(beta[t], source, "beta[" + std::to_string(t) + "]");
    if (b.size() == 0) fail(source, "beta[" + std::to_string(t) + "]", "must be nonempty");
    spec.beta.push_back(std::move(b));
  }

  const json& A = j["A"];
  if (A.is_string()) {
    if (A.get<std::string>() != "consensus3") fail(source, "A", "unknown operator name (expected \"consensus3\")");
    if (B != 3) fail(source, "alpha", "consensus3 needs exactly 3 blocks");
    const auto n = spec.beta[0].size();
    for (std::size_t t = 1; t < 3; ++t) {
      if (spec.beta[t].size() != n) fail(source, "beta[" + std::to_string(t) + "]", "consensus3 needs equal block sizes");
    }
    spec.A = make_consensus3(static_cast<int>(n));
  } else {
    if (!A.is_array() || A.size() != B) fail(source, "A", "expected \"consensus3\" or " + std::to_string(B) + " matrices");
    std::vector<OperatorPtr> blocks;
    Eigen::Index rows = -1;
    for (std::size_t t = 0; t < B; ++t) {
      const std::string field = "A[" + std::to_string(t) + "]";
      Eigen::MatrixXd M = matrix_at(A[t], source, field);
      if (rows >= 0 && M.rows() != rows) fail(source, field, "row count differs from A[0]");
      if (M.cols() != spec.beta[t].size()) {
        fail(source, field, "expected " + std::to_string(spec.beta[t].size()) + " columns to match beta[" +
                                std::to_string(t) + "]");
      }
      rows = M.rows();
      blocks.push_back(std::make_shared<DenseOperator>(std::move(M)));
    }
    spec.A = BlockOperator(std::move(blocks));
  }

  if (j.contains("d")) {
    spec.d = vector_at(j["d"], source, "d");
    if (spec.d.size() != spec.A.rows()) fail(source, "d", "expected " + std::to_string(spec.A.rows()) + " entries");
  } else {
    spec.d = Vector::Zero(spec.A.rows());
  }
  return spec;
}

BoxQuadraticSpec load_problem_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ProblemFormatError(path + ": cannot open problem file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem_json(buf.str(), path);
}

std::string solve_result_json(const SolveResult& result) {
  auto blocks = [](const BlockVector& x) {
    json out = json::array();
    for (int t = 0; t < x.num_blocks(); ++t) out.push_back(std::vector<double>(x[t].data(), x[t].data() + x[t].size()));
    return out;
  };
  auto vec = [](const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); };

  json cycles = json::array();
  for (const auto& c : result.cycles) {
    cycles.push_back({{"c", c.c}, {"iterations", c.iterations}, {"status", to_string(c.status)}, {"p0_norm", c.p0_norm}});
  }
  json j = {{"status", to_string(result.status)},
            {"total_iterations", result.total_iterations},
            {"v_norm", result.v_norm},
            {"feas_norm", result.feas_norm},
            {"z", blocks(result.z_bar)},
            {"p", vec(result.p_bar)},
            {"q", vec(result.q_bar)},
            {"v", blocks(result.v_bar)},
            {"cycles", cycles}};
  return j.dump(2);
}

void write_telemetry_jsonl(const SolveResult& result, std::ostream& out) {
  for (std::size_t l = 0; l < result.cycle_results.size(); ++l) {
    const auto& cyc = result.cycle_results[l];
    for (const auto& r : cyc.telemetry) {
      json j = {{"cycle", l + 1}, {"k", r.k}, {"c", cyc.c}, {"v_norm", r.v_norm}, {"f_norm", r.f_norm},
                {"p_norm", r.p_norm}};
      if (std::isfinite(r.psi)) j["psi"] = r.psi;
      out << j.dump() << '\n';
    }
  }
}

}  // namespace dpadmm
