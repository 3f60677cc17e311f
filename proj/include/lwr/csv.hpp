#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace lwr::csv {

/// Shortest representation that round-trips; identical inputs give identical bytes.
/// NaN is written as an empty field.
std::string format_number(double x);
std::string format_number(std::size_t x);

/// Throws std::invalid_argument on anything but a complete number (nan/inf accepted).
double parse_number(std::string_view field);
/// Like parse_number, but an empty field reads as NaN.
double parse_nullable(std::string_view field);

std::vector<std::string_view> split_row(std::string_view line);

}  // namespace lwr::csv
