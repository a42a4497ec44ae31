// Command-line front end. Every experiment command prints one JSON record per
// line: {"command", "format", "inputs", "results", "timings_ms"}. Everything
// except "timings_ms" is a deterministic function of the inputs.

#pragma once

#include <ostream>

namespace qsr::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,        ///< bad flags, unreadable or malformed input
  kInfeasible = 2,   ///< size guard exceeded or infeasible allocation
  kInvariant = 3,    ///< a requested numerical check failed
};

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qsr::cli
