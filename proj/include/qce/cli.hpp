#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qce {

enum ExitCode { kExitOk = 0, kExitVerifyFailed = 1, kExitBadInput = 2, kExitNoConvergence = 3 };

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// "a0:a1:n" inclusive of both ends, or a single number.
std::vector<double> parse_grid(const std::string& spec);

}  // namespace qce
