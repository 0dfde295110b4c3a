#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace fragsim::text {

std::string_view trim(std::string_view s);
std::vector<std::string_view> split(std::string_view s, char sep);

/// Strict numeric parsing; throws ConfigError naming `what` on failure.
double parse_double(std::string_view s, std::string_view what);
std::uint64_t parse_u64(std::string_view s, std::string_view what);
std::vector<double> parse_double_list(std::string_view s, std::string_view what);

/// printf-style "%.17g".
std::string format_g17(double v);
/// Shortest text that parses back to the same double.
std::string format_shortest(double v);

}  // namespace fragsim::text
