#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace dirl {

// Shortest round-trip decimal form of x. All file writers go through this so
// identical inputs serialize to identical bytes.
std::string format_double(double x);

// Splits a delimited line; does not unquote (field values must not contain
// the delimiter, which parsers enforce for identifiers).
std::vector<std::string> split(std::string_view line, char delim);

std::string_view trim(std::string_view s);

} // namespace dirl
