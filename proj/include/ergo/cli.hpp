#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ergo::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNo = 10;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumeric = 3;

/// Parses args (without the program name) and runs one subcommand.
/// Reports go to `out`, diagnostics to `err`. Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ergo::cli
