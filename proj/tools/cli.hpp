#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fuzzyflow::cli {

enum ExitCode : int { ok = 0, failure = 1, not_converged = 2 };

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fuzzyflow::cli
