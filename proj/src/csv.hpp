// Internal comma-separated-value reader/writer, RFC-4180 flavored:
// quoted cells, doubled quotes, embedded commas and line breaks; LF or
// CRLF row endings accepted on input, LF written on output.

#pragma once

#include <string>
#include <vector>

namespace reqtest::detail {

std::vector<std::vector<std::string>> parse_csv(const std::string& text);

// Quotes the value only when it contains a comma, quote, or line break.
std::string csv_cell(const std::string& value);

// Shortest decimal form that round-trips the double.
std::string format_double(double value);

}  // namespace reqtest::detail
