#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "dpadmm/bench.hpp"
#include "dpadmm/dynamic_admm.hpp"

namespace dpadmm {

/// Malformed problem file; the message names the file and the offending field.
class ProblemFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses a quadratic-over-box problem:
///   {"gamma": r, "alpha": [a_1..a_B], "beta": [[...], ...],
///    "A": "consensus3" | [[[row], ...] per block], "d": [...]}
/// "d" defaults to zero. `source` prefixes error messages.
BoxQuadraticSpec parse_problem_json(const std::string& text, const std::string& source = "<input>");
BoxQuadraticSpec load_problem_json(const std::string& path);

/// SolveResult as JSON text (iterates, norms, per-cycle breakdown).
std::string solve_result_json(const SolveResult& result);

/// One JSON object per iteration: cycle, k, c, v_norm, f_norm, p_norm and psi when finite.
void write_telemetry_jsonl(const SolveResult& result, std::ostream& out);

}  // namespace dpadmm
