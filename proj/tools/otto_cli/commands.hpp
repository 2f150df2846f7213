#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace otto::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitDomain = 2,
    kExitTolerance = 3,
};

/// Runs the `otto` command line. argv[0] is the program name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Same, with the arguments after the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace otto::cli
