#pragma once

// Shared line grammar of the native and foreign document formats.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ddix/corpus.hpp"

namespace ddix::detail {

struct RawMention {
  std::string id;
  std::string kind;
  int sentence = 0;
  Span span;
  std::optional<DdiType> ddi;
  std::size_t line = 0;
};

struct RawInteraction {
  DdiType type = DdiType::UN;
  std::map<std::string, std::string, std::less<>> fields;
  std::size_t line = 0;
};

struct RawDocument {
  std::string id;
  std::string label_drug;
  std::vector<std::string> aliases;
  std::vector<corpus::Sentence> sentences;
  std::vector<RawMention> mentions;
  std::vector<RawInteraction> interactions;
};

struct RecordGrammar {
  std::string_view header;                   // "DOC" or "FDOC"
  std::vector<std::string_view> kinds;       // accepted MENTION kinds
  std::vector<std::string_view> int_fields;  // accepted INT keys other than SUBTYPE
};

RawDocument parse_raw_document(std::string_view blob, const RecordGrammar& grammar);

std::string render_header(std::string_view keyword, const std::string& id,
                          const std::string& label_drug,
                          const std::vector<std::string>& aliases);
std::string render_sentence(int index, const corpus::Sentence& sentence);
std::string render_mention(const std::string& id, std::string_view kind, int sentence,
                           const Span& span, const std::optional<DdiType>& ddi);

}  // namespace ddix::detail
