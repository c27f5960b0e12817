#pragma once

#include <string>

namespace cacperf {

/// Locale-independent `%.{digits}g` formatting.
std::string format_significant(double value, int digits);

/// `value` rounded to `digits` significant digits.
double round_significant(double value, int digits);

}  // namespace cacperf
