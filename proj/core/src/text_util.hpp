#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace ddix::detail {

std::string to_lower(std::string_view text);
bool is_space(char c);

struct Word {
  std::string_view text;
  std::size_t column;  // 1-based
};

// Whitespace-separated words of a line with their columns.
std::vector<Word> split_words(std::string_view line);

// Lines of a blob (without terminators; a trailing '\r' is dropped).
std::vector<std::string_view> split_lines(std::string_view blob);

// Splits a blob holding several records each introduced by a line starting
// with `header` (e.g. "DOC "), keeping comment lines with the following record.
std::vector<std::string_view> split_records(std::string_view blob, std::string_view header);

// Decodes UTF-8 into code point substrings; invalid bytes become single-byte units.
std::vector<std::string_view> utf8_units(std::string_view text);

}  // namespace ddix::detail
