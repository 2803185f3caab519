#pragma once

#include <cstdio>
#include <string>
#include <string_view>

namespace wfollow {

/// Fixed six-decimal rendering used by every CSV and key-value artifact.
/// Negative zero prints as "0.000000" so equal values give equal bytes.
inline std::string fixed6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  if (std::string_view(buf) == "-0.000000") return "0.000000";
  return buf;
}

}  // namespace wfollow
