#pragma once

namespace maxinc {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRuntime = 3;
inline constexpr int kExitSelftest = 4;

inline constexpr const char* kVersion = "0.1.0";

// Entry point of the `maxinc` tool; returns the process exit code.
int run_cli(int argc, char** argv);

}  // namespace maxinc
