#pragma once

#include <iosfwd>

namespace wfollow::cli {

enum ExitCode : int {
  kSuccess = 0,
  kCriteriaFailed = 1,
  kConfigError = 2,
  kIoError = 3,
};

/// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "WFOLLOW_OUT";

/// Entry point shared by the executable and the tests.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wfollow::cli
