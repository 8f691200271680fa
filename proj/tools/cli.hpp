#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace cogme::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kDataError = 1;
inline constexpr int kUsageError = 2;

// Runs one subcommand. `args` excludes the program name. Data goes to `out`
// (or to files), diagnostics to `err`.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace cogme::cli
