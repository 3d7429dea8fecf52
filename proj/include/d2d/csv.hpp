#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace d2d {

/// Shortest decimal form that round-trips to the same double.
std::string format_double(double v);

std::vector<std::string> split(std::string_view line, char sep);

std::string_view trim(std::string_view s);

}  // namespace d2d
