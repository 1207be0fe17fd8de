#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace igahmm::cli {

enum ExitCode : int { Ok = 0, ConfigFailure = 2, SolverFailure = 3, GeometryFailure = 4, IoFailure = 5 };

/// Runs the command line tool; all output goes to the given streams.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace igahmm::cli
