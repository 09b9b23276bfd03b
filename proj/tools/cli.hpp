#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hypembed::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Runs the command line `args` (args[0] is the program name). Normal output
/// goes to out, diagnostics and usage text to err.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hypembed::cli
