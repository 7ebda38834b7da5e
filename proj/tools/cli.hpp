#pragma once

#include <string>
#include <vector>

namespace chankit::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// Runs the command line `args` (args[0] is the program name) and returns
// the exit code. Diagnostics go to stderr; verbosity follows CHANKIT_LOG
// (error, warn, info, debug; default warn).
int run(const std::vector<std::string>& args);

} // namespace chankit::cli
