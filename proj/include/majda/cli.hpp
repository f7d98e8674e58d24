/// @file cli.hpp
/// @brief Entry point of the `majda` command-line tool.
///
/// Exit codes: 0 success, 1 a run breached an invariant or failed at
/// runtime, 2 usage or configuration error.
#pragma once

namespace majda {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

int cli_main(int argc, const char* const* argv);

}  // namespace majda
