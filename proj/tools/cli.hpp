#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace orderest::cli {

/// Exit statuses of the command-line tool.
enum ExitCode : int { ok = 0, failure = 1, usage = 2 };

/// Runs one invocation; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace orderest::cli
