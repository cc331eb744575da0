#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lmd {

/// Exit codes of the `lmd` tool.
enum ExitCode : int { kExitOk = 0, kExitUser = 1, kExitInternal = 2 };

/// Runs `lmd` with `args` (program name excluded). The REPL reads `in`.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace lmd
