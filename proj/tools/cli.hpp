#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace procnet {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDistinguished = 1;
inline constexpr int kExitInconclusive = 2;
inline constexpr int kExitError = 3;

/// Runs one command line (without the program name). Errors are reported on
/// `err` as `error: <category>: <message>`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace procnet
