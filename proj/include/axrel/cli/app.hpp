#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace axrel::cli {

inline constexpr const char* kToolName = "axrel";
inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int {
  kSuccess = 0,
  kUsageError = 1,
  kConfigError = 2,
  kDataError = 3,
  kNoPassingWidth = 4,
};

// Entry point shared by the executable and the tests.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace axrel::cli
