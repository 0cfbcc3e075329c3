#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gsp/report.hpp"

namespace gsp {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitInfeasible = 1,
  kExitInvalidInput = 2,
  kExitNumerical = 3,
};

/// Runs one CLI invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

/// Executes a fully parsed configuration (used by `replay`). Throws the
/// library exceptions; `run` maps them to exit codes.
void execute(const RunConfig& config, std::ostream& out);

/// Builds the problem described by a configuration at the given gamma.
Problem load_problem(const RunConfig& config, double gamma = 0.0);

/// Shortest representation that reads back as a floating-point literal,
/// e.g. "2.0" rather than "2".
std::string format_real(double value);

}  // namespace gsp
