#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace satcs::cli {

// Exit codes.
inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 2;
inline constexpr int exit_io = 3;
inline constexpr int exit_infeasible = 10;

/// Runs one invocation. args excludes the program name. Machine-readable
/// results go to `out`, diagnostics and progress to `err`.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace satcs::cli
