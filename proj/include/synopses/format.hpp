#pragma once

#include <string>
#include <string_view>

namespace synopses {

/// Fixed-point rendering with `decimals` places; every numeric value written
/// by the library goes through here so output files are byte-stable.
std::string fixed(double value, int decimals = 6);

/// Shortest text that parses back to exactly `value`.
std::string shortest(double value);

/// JSON string literal with the mandatory escapes.
std::string json_quote(std::string_view text);

} // namespace synopses
