#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace plike::csv {

/// Shortest-general decimal with 17 significant digits; round-trips doubles.
std::string format_number(double value);

/// Strict parse of a full field as a double; throws DataFormatError.
double parse_number(std::string_view field);

/// Splits one line on commas and trims surrounding blanks and a trailing '\r'.
std::vector<std::string_view> split(std::string_view line);

}  // namespace plike::csv
