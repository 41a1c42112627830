#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gadget_forge::cli {

/// Exit codes shared by every command.
inline constexpr int kOk = 0;
inline constexpr int kNegative = 1;  // solve: UNSAT; verify: fail cells present
inline constexpr int kError = 2;

/// Runs one command. args excludes the program name. Output defaults to
/// `out` unless --out is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

}  // namespace gadget_forge::cli
