#pragma once

#include <cstdio>
#include <string>

namespace iris::detail {

// Full-precision decimal rendering (round-trips doubles exactly).
inline std::string fmt_full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace iris::detail
