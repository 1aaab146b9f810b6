#include "text_util.hpp"

namespace ddix::detail {

std::string to_lower(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::vector<Word> split_words(std::string_view line) {
  std::vector<Word> words;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    std::size_t start = i;
    while (i < line.size() && !is_space(line[i])) ++i;
    if (i > start) words.push_back({line.substr(start, i - start), start + 1});
  }
  return words;
}

std::vector<std::string_view> split_lines(std::string_view blob) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < blob.size()) {
    std::size_t nl = blob.find('\n', pos);
    std::size_t end = nl == std::string_view::npos ? blob.size() : nl;
    std::string_view line = blob.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return lines;
}

std::vector<std::string_view> split_records(std::string_view blob, std::string_view header) {
  std::vector<std::string_view> records;
  std::size_t record_start = 0;
  std::size_t pending_start = std::string_view::npos;  // first comment line before a header
  bool seen_header = false;
  std::size_t pos = 0;
  while (pos < blob.size()) {
    std::size_t nl = blob.find('\n', pos);
    std::size_t end = nl == std::string_view::npos ? blob.size() : nl;
    std::string_view line = blob.substr(pos, end - pos);
    std::size_t first = line.find_first_not_of(" \t");
    std::string_view stripped =
        first == std::string_view::npos ? std::string_view{} : line.substr(first);
    if (stripped.starts_with('#') || stripped.empty()) {
      if (pending_start == std::string_view::npos) pending_start = pos;
    } else {
      if (stripped.starts_with(header)) {
        std::size_t boundary = pending_start == std::string_view::npos ? pos : pending_start;
        if (seen_header) records.push_back(blob.substr(record_start, boundary - record_start));
        if (!seen_header) boundary = 0;
        record_start = boundary;
        seen_header = true;
      }
      pending_start = std::string_view::npos;
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  if (seen_header) records.push_back(blob.substr(record_start));
  return records;
}

std::vector<std::string_view> utf8_units(std::string_view text) {
  std::vector<std::string_view> units;
  std::size_t i = 0;
  while (i < text.size()) {
    auto lead = static_cast<unsigned char>(text[i]);
    std::size_t len = 1;
    if (lead >= 0xF0 && lead < 0xF8) {
      len = 4;
    } else if (lead >= 0xE0) {
      len = lead < 0xF0 ? 3 : 1;
    } else if (lead >= 0xC0) {
      len = 2;
    }
    if (i + len > text.size()) len = 1;
    for (std::size_t k = 1; k < len; ++k) {
      if ((static_cast<unsigned char>(text[i + k]) & 0xC0) != 0x80) {
        len = 1;
        break;
      }
    }
    units.push_back(text.substr(i, len));
    i += len;
  }
  return units;
}

}  // namespace ddix::detail
