#pragma once

#include <cstdio>
#include <string>

namespace gamelab {

/// Shortest-width formatting with 17 significant digits, enough to round-trip
/// any double exactly. Used by every CSV/JSON writer so outputs are
/// byte-reproducible.
inline std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace gamelab
