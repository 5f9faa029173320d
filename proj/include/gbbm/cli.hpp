#pragma once

#include <string>
#include <vector>

namespace gbbm {

// Exit codes: 0 success, 2 config error, 3 numerical failure,
// 4 verification failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitVerification = 4;

/// Subcommand dispatcher: run, verify-helmholtz, verify-energy,
/// dependence, convergence.
int cli_main(const std::vector<std::string>& args);

}  // namespace gbbm
