#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace gfl::text {

std::string_view trim(std::string_view s);

/// Splits on `sep`, trimming each piece. Empty input gives an empty list.
std::vector<std::string> split(std::string_view s, char sep);

/// Splits on `sep` only outside parentheses.
std::vector<std::string> split_top_level(std::string_view s, char sep);

bool starts_with(std::string_view s, std::string_view prefix);

/// Whole file as a string; throws ParseError when unreadable.
std::string read_file(const std::string& path);

/// Lines with comments (`#` to end of line) removed and blank lines skipped.
std::vector<std::string> content_lines(std::string_view body);

}  // namespace gfl::text
