#pragma once

#include <string>

namespace dosnet {

/// `value` printed with 17 significant digits (round-trips exactly); `inf`,
/// `-inf`, `nan` for non-finite values.
std::string format_double(double value);

/// Inverse of format_double (accepts any strtod-style number, inf and nan).
double parse_double(const std::string& text);

}  // namespace dosnet
