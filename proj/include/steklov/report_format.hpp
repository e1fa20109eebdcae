#pragma once

#include <cstdio>
#include <string>

namespace steklov {

/// 17 significant digits in scientific notation; round-trips every double.
inline std::string sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

}  // namespace steklov
