// cli.hpp: argument parsing and dispatch for the opexp executable

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace opexp::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitPropertyFailure = 1,
    kExitUsage = 2,
    kExitNumerical = 3,
};

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace opexp::cli
