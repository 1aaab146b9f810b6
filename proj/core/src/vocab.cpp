#include <charconv>

#include "ddix/features.hpp"
#include "text_util.hpp"

namespace ddix::features {

Vocab::Vocab() {
  for (auto* table : {&words_, &chars_}) {
    table->push_back("<pad>");
    table->push_back("<unk>");
  }
  word_index_ = {{"<pad>", kPad}, {"<unk>", kUnk}};
  char_index_ = word_index_;
}

void Vocab::add_word(std::string_view word) {
  std::string key = detail::to_lower(word);
  if (word_index_.emplace(key, word_count()).second) words_.push_back(std::move(key));
}

void Vocab::add_char(std::string_view unit) {
  std::string key(unit);
  if (char_index_.emplace(key, char_count()).second) chars_.push_back(std::move(key));
}

void Vocab::fit(const std::vector<corpus::Sentence>& sentences) {
  for (const auto& s : sentences) {
    for (const auto& t : s.tokens) {
      add_word(t.text);
      for (auto unit : detail::utf8_units(t.text)) add_char(unit);
    }
  }
}

int Vocab::word_id(std::string_view token) const {
  auto it = word_index_.find(detail::to_lower(token));
  return it == word_index_.end() ? kUnk : it->second;
}

int Vocab::char_id(std::string_view unit) const {
  auto it = char_index_.find(std::string(unit));
  return it == char_index_.end() ? kUnk : it->second;
}

std::vector<int> Vocab::char_ids(std::string_view token) const {
  std::vector<int> ids;
  for (auto unit : detail::utf8_units(token)) ids.push_back(char_id(unit));
  return ids;
}

std::string Vocab::serialize() const {
  std::string out = "# ddix vocabulary v1\n";
  out += "PAD\t" + std::to_string(kPad) + "\n";
  out += "UNK\t" + std::to_string(kUnk) + "\n";
  out += "[words]\t" + std::to_string(words_.size()) + "\n";
  for (std::size_t i = 0; i < words_.size(); ++i) {
    out += std::to_string(i) + "\t" + words_[i] + "\n";
  }
  out += "[chars]\t" + std::to_string(chars_.size()) + "\n";
  for (std::size_t i = 0; i < chars_.size(); ++i) {
    out += std::to_string(i) + "\t" + chars_[i] + "\n";
  }
  return out;
}

Vocab Vocab::parse(std::string_view text) {
  Vocab v;
  v.words_.clear();
  v.chars_.clear();
  v.word_index_.clear();
  v.char_index_.clear();
  std::vector<std::string>* table = nullptr;
  std::unordered_map<std::string, int>* index = nullptr;
  auto lines = detail::split_lines(text);
  for (std::size_t li = 0; li < lines.size(); ++li) {
    std::string_view line = lines[li];
    const std::size_t line_no = li + 1;
    if (line.empty() || line.starts_with('#')) continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos) throw ParseError("expected a tab", line_no, 1);
    std::string_view key = line.substr(0, tab);
    std::string_view value = line.substr(tab + 1);
    auto parse_int = [&](std::string_view s, std::size_t col) {
      int x = 0;
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
      if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw ParseError("expected an integer, got '" + std::string(s) + "'", line_no, col);
      }
      return x;
    };
    if (key == "PAD" || key == "UNK") {
      int id = parse_int(value, tab + 2);
      if (id != (key == "PAD" ? kPad : kUnk)) {
        throw ParseError("unsupported " + std::string(key) + " id " + std::to_string(id), line_no,
                         tab + 2);
      }
    } else if (key == "[words]") {
      table = &v.words_;
      index = &v.word_index_;
    } else if (key == "[chars]") {
      table = &v.chars_;
      index = &v.char_index_;
    } else {
      if (!table) throw ParseError("entry before a [words] or [chars] section", line_no, 1);
      int id = parse_int(key, 1);
      if (id != static_cast<int>(table->size())) {
        throw ParseError("index " + std::to_string(id) + " is not dense", line_no, 1);
      }
      if (!index->emplace(std::string(value), id).second) {
        throw ParseError("duplicate entry '" + std::string(value) + "'", line_no, tab + 2);
      }
      table->emplace_back(value);
    }
  }
  if (v.words_.size() < 2 || v.chars_.size() < 2) {
    throw ParseError("vocabulary lacks the reserved PAD/UNK entries", 0, 0);
  }
  return v;
}

}  // namespace ddix::features
