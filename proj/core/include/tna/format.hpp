#pragma once

#include <string>

namespace tna {

/// Formats a double with the given number of significant digits ("%.*g").
/// Output is locale-independent and stable across runs; -0 is normalized to 0
/// so exports stay byte-identical regardless of how a zero was produced.
std::string format_double(double value, int significant_digits = 6);

/// 17 significant digits: enough to round-trip any double exactly.
inline std::string format_double_full(double value) { return format_double(value, 17); }

}  // namespace tna
