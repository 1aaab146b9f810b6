#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ddix/corpus.hpp"

namespace ddix::features {

enum class ShapeClass { Upper = 0, UpperFirst = 1, Lower = 2, NumPunc = 3 };
inline constexpr int kShapeClassCount = 4;

std::string_view to_string(ShapeClass shape);

// Tokens without letters are NUM_PUNC; all letters uppercase is UPPER; an
// uppercase first letter followed only by lowercase letters is UPPER_FIRST;
// anything else (including mixed case such as "mRNA") is LOWER.
ShapeClass word_shape(std::string_view token);

// Coarse distance to an anchor (label drug or precipitant).
inline constexpr int kAbsentAnchor = 200;

// d = number of tokens strictly between the token and the nearest anchor
// token (0 inside or next to an anchor); bucket = d / 5. No anchors gives 200.
int distance_bucket(int token_index, const std::vector<Span>& anchors);

class Vocab {
 public:
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;

  Vocab();

  // Adds every token (lowercased) and every character of the sentences.
  void fit(const std::vector<corpus::Sentence>& sentences);
  void add_word(std::string_view word);
  void add_char(std::string_view unit);

  int word_id(std::string_view token) const;  // lowercases; kUnk when unseen
  int char_id(std::string_view unit) const;
  std::vector<int> char_ids(std::string_view token) const;

  int word_count() const { return static_cast<int>(words_.size()); }
  int char_count() const { return static_cast<int>(chars_.size()); }
  const std::string& word(int id) const { return words_.at(id); }
  const std::string& character(int id) const { return chars_.at(id); }

  // Plain text: header lines for PAD/UNK, then "<index>\t<entry>" lines.
  std::string serialize() const;
  static Vocab parse(std::string_view text);

  friend bool operator==(const Vocab& a, const Vocab& b) {
    return a.words_ == b.words_ && a.chars_ == b.chars_;
  }

 private:
  std::vector<std::string> words_;
  std::vector<std::string> chars_;
  std::unordered_map<std::string, int> word_index_;
  std::unordered_map<std::string, int> char_index_;
};

struct FeatureRow {
  int word_id = Vocab::kUnk;
  ShapeClass shape = ShapeClass::Lower;
  int position = kAbsentAnchor;
  std::vector<int> char_ids;

  friend bool operator==(const FeatureRow&, const FeatureRow&) = default;
};

// One row per token, position measured from the given anchors.
std::vector<FeatureRow> build_rows(const corpus::Sentence& sentence,
                                   const std::vector<Span>& anchors, const Vocab& vocab);

// Step 1 anchors on label drug occurrences.
std::vector<FeatureRow> build_step1_features(const corpus::Sentence& sentence,
                                             const std::vector<Span>& label_drug_occurrences,
                                             const Vocab& vocab);

// Steps 2 and 3 anchor on one precipitant.
std::vector<FeatureRow> build_step2_features(const corpus::Sentence& sentence,
                                             const Span& precipitant, const Vocab& vocab);

}  // namespace ddix::features
