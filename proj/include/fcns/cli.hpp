#pragma once

// Command-line front end. `fcns <command> [options]` with commands
// simulate-linear, simulate-ns, simulate-delayed, verify-bounds,
// verify-oracles, breakdown-report and fixed-point-check.
//
// Exit status: 0 success, 1 verification failure, 2 configuration error.

#include <ostream>

namespace fcns {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitConfigError = 2;

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fcns
