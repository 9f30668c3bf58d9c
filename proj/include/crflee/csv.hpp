#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace crflee::csv {

/// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double v);

double parse_double(std::string_view s);
std::int64_t parse_int(std::string_view s);

/// Splits one line on ','. No quoting: every field this project writes is
/// plain text without separators.
std::vector<std::string> split(std::string_view line);

std::string join(const std::vector<std::string>& fields);

}  // namespace crflee::csv
