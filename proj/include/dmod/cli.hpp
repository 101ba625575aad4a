#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dmod::cli {

/// Runs one command line (without the program name). Returns the process
/// exit code: 0 success or SOLVED or bound satisfied, 2 UNSOLVABLE or bound
/// violated, 3 UNDECIDED_AT_CAP or NotStabilized, 1 usage or parse error.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace dmod::cli
