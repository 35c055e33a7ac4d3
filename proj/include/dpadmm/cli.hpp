#pragma once

#include <iosfwd>

namespace dpadmm {

/// Exit codes of the command-line front end.
enum ExitCode : int { kExitOk = 0, kExitInputError = 1, kExitBudgetExceeded = 2 };

/// Entry point of the `dpadmm` tool with injectable streams. Relative output
/// paths resolve against $DPADMM_OUTPUT_DIR when it is set.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dpadmm
