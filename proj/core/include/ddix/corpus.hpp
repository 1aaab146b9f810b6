#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ddix/subtype.hpp"
#include "ddix/types.hpp"

namespace ddix::corpus {

struct Token {
  std::string text;
  std::size_t start = 0;  // byte offset into the sentence
  std::size_t end = 0;    // exclusive

  friend bool operator==(const Token&, const Token&) = default;
};

// Whitespace split, then leading/trailing punctuation peeled into one-character
// tokens. Hyphens, slashes, percent signs and digits stay attached, so "86%"
// and "co-administration" are single tokens.
std::vector<Token> tokenize(std::string_view raw);

struct Sentence {
  std::string text;
  std::vector<Token> tokens;

  static Sentence from_text(std::string text);
  int size() const { return static_cast<int>(tokens.size()); }
  // Token texts of the span joined by single spaces, across fragment gaps.
  std::string span_text(const Span& span) const;

  friend bool operator==(const Sentence&, const Sentence&) = default;
};

struct Mention {
  std::string id;
  MentionKind kind = MentionKind::Precipitant;
  int sentence = 0;
  Span span;
  std::optional<DdiType> ddi;  // set iff kind == Trigger

  friend bool operator==(const Mention&, const Mention&) = default;
};

struct Interaction {
  DdiType type = DdiType::UN;
  std::string precipitant;
  std::string trigger;
  std::optional<std::string> specific_interaction;  // PD only
  std::optional<PkSubtype> pk_subtype;              // PK only

  friend bool operator==(const Interaction&, const Interaction&) = default;
};

struct Document {
  std::string id;
  std::string label_drug;
  std::vector<std::string> label_drug_aliases;
  std::vector<Sentence> sentences;
  std::vector<Mention> mentions;
  std::vector<Interaction> interactions;

  const Mention* find_mention(std::string_view id) const;
  // Canonical name followed by aliases.
  std::vector<std::string> label_drug_names() const;

  friend bool operator==(const Document&, const Document&) = default;
};

// Throws ValidationError naming the first broken invariant.
void validate(const Document& doc);

// Lowercases ASCII and collapses whitespace runs to one space.
std::string normalize_name(std::string_view name);

// Case-insensitive exact matches of any name against token subsequences.
// Overlapping hits keep the leftmost-longest one.
std::vector<Span> find_occurrences(const Sentence& sentence,
                                   const std::vector<std::string>& names);

// True when the span's text equals one of the names, case-insensitively.
bool matches_any_name(const Sentence& sentence, const Span& span,
                      const std::vector<std::string>& names);

// Line-oriented document format:
//   DOC <id> LABELDRUG <name> [ALIAS <name>]*
//   SENT <idx> <raw text>
//   MENTION <id> <kind> <sent idx> <a-b[,c-d]*> [DDI <PK|PD|UN>]
//   INT <type> P=<id> T=<id> [S=<id>] [SUBTYPE=<code>]
// '#' starts a comment line. Throws ParseError or ValidationError.
Document parse_document(std::string_view blob);
std::string serialize_document(const Document& doc);

// Files holding several documents are concatenations of single-document blobs.
std::vector<Document> parse_documents(std::string_view blob);

// NLM-style input as defined by this project: label drug mentions are
// annotated (kind LabelDrug), and a PD interaction's T= field names what is
// really the specific interaction. The real PD trigger, when known, is given
// in an auxiliary RT= field.
//   FDOC <id> LABELDRUG <name> [ALIAS <name>]*
//   SENT <idx> <raw text>
//   MENTION <id> <LabelDrug|Precipitant|Trigger|SpecificInteraction> <sent> <frags> [DDI <t>]
//   INT <type> P=<id> T=<id> [RT=<id>] [SUBTYPE=<code>]
// Trigger mentions take their DDI type from the interactions that use them;
// an explicit DDI is only needed on unreferenced triggers.
struct ForeignMention {
  std::string id;
  std::string kind;  // LabelDrug, Precipitant, Trigger, SpecificInteraction
  int sentence = 0;
  Span span;
  std::optional<DdiType> ddi;

  friend bool operator==(const ForeignMention&, const ForeignMention&) = default;
};

struct ForeignInteraction {
  DdiType type = DdiType::UN;
  std::string precipitant;
  std::string trigger;
  std::optional<std::string> real_trigger;
  std::optional<PkSubtype> pk_subtype;

  friend bool operator==(const ForeignInteraction&, const ForeignInteraction&) = default;
};

struct ForeignDocument {
  std::string id;
  std::string label_drug;
  std::vector<std::string> label_drug_aliases;
  std::vector<Sentence> sentences;
  std::vector<ForeignMention> mentions;
  std::vector<ForeignInteraction> interactions;

  friend bool operator==(const ForeignDocument&, const ForeignDocument&) = default;
};

ForeignDocument parse_foreign_document(std::string_view blob);
std::vector<ForeignDocument> parse_foreign_documents(std::string_view blob);
std::string serialize_foreign_document(const ForeignDocument& doc);

// Drops label drug mentions (their text becomes an alias), turns the PD
// "trigger" into the specific interaction and promotes RT= to the trigger.
// Throws ValidationError("missing PD trigger ...") when RT= is absent.
Document convert_nlm180(const ForeignDocument& foreign);

// Inverse of convert_nlm180 for documents whose label drug occurrences are
// found by alias matching. Used to produce converter input from synthetic data.
ForeignDocument export_foreign(const Document& doc);

// Deterministic synthetic drug-label corpus.
std::vector<Document> synth_corpus(std::uint64_t seed, int n_docs);

}  // namespace ddix::corpus
