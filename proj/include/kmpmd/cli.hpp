#pragma once

// Command-line entry point. Subcommands: gen, run, opt, lp, audit, bench,
// check-metric, lowerbound.
//
// Exit codes: 0 success, 1 malformed input, 2 guard exceeded, 3 audit violation.

#include <ostream>
#include <string>
#include <vector>

namespace kmpmd {

inline constexpr int exit_ok = 0;
inline constexpr int exit_input = 1;
inline constexpr int exit_guard = 2;
inline constexpr int exit_violation = 3;

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cli_main(int argc, char** argv);

}  // namespace kmpmd
