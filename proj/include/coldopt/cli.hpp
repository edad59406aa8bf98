#pragma once

#include <string>
#include <vector>

namespace coldopt::cli {

/// Runs the command line (argv without the program name) and returns the
/// process exit code: 0 success, 2 usage/parse/validation errors,
/// 3 infeasible model, 4 internal numerical failure.
int run(const std::vector<std::string>& args);

} // namespace coldopt::cli
