#include <string_view>

#include "ddix/corpus.hpp"
#include "text_util.hpp"

namespace ddix::corpus {
namespace {

// Characters split off the edges of a whitespace chunk. '%', '-', '/' and '+'
// are deliberately absent so that "86%" and "co-administration" stay whole.
bool is_edge_punct(char c) {
  switch (c) {
    case '.': case ',': case ';': case ':': case '!': case '?':
    case '(': case ')': case '[': case ']': case '{': case '}':
    case '"': case '\'': case '`':
      return true;
    default:
      return false;
  }
}

}  // namespace

std::vector<Token> tokenize(std::string_view raw) {
  std::vector<Token> tokens;
  auto emit = [&](std::size_t start, std::size_t end) {
    tokens.push_back({std::string(raw.substr(start, end - start)), start, end});
  };
  std::size_t i = 0;
  while (i < raw.size()) {
    while (i < raw.size() && detail::is_space(raw[i])) ++i;
    std::size_t start = i;
    while (i < raw.size() && !detail::is_space(raw[i])) ++i;
    std::size_t end = i;
    if (start == end) continue;

    while (start < end && is_edge_punct(raw[start])) {
      emit(start, start + 1);
      ++start;
    }
    std::size_t core_end = end;
    while (core_end > start && is_edge_punct(raw[core_end - 1])) --core_end;
    if (core_end > start) emit(start, core_end);
    for (std::size_t p = core_end; p < end; ++p) emit(p, p + 1);
  }
  return tokens;
}

Sentence Sentence::from_text(std::string text) {
  Sentence s;
  s.tokens = tokenize(text);
  s.text = std::move(text);
  return s;
}

std::string Sentence::span_text(const Span& span) const {
  std::string out;
  for (int t : span.tokens()) {
    if (t < 0 || t >= size()) continue;
    if (!out.empty()) out += ' ';
    out += tokens[t].text;
  }
  return out;
}

}  // namespace ddix::corpus
