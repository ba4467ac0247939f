#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rbe::cli {

// Exit codes shared by all subcommands.
inline constexpr int kOk = 0;
inline constexpr int kInputError = 1;
inline constexpr int kNotConverged = 2;
inline constexpr int kCheckFailed = 3;

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rbe::cli
