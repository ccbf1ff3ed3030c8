#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace circreg {

/// Exit statuses of run_cli.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs the command line `args` (without the program name). Normal output
/// goes to `out` unless --out names a file; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace circreg
