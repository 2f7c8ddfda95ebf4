#pragma once

#include <string>
#include <vector>

namespace smm::cli {

// Exit codes shared by every subcommand.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kSingularStart = 2;
inline constexpr int kInvalidSeed = 3;
inline constexpr int kIoError = 4;
inline constexpr int kDegenerateDirection = 5;
inline constexpr int kAllFailed = 6;
inline constexpr int kSweepIncomplete = 7;

/// Runs the command line; args excludes the program name.
int run(const std::vector<std::string>& args);

}  // namespace smm::cli
