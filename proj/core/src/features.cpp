#include "ddix/features.hpp"

#include <algorithm>
#include <limits>

namespace ddix::features {

std::string_view to_string(ShapeClass shape) {
  switch (shape) {
    case ShapeClass::Upper: return "UPPER";
    case ShapeClass::UpperFirst: return "UPPER_FIRST";
    case ShapeClass::Lower: return "LOWER";
    case ShapeClass::NumPunc: return "NUM_PUNC";
  }
  return "?";
}

ShapeClass word_shape(std::string_view token) {
  bool any_letter = false;
  bool all_upper = true;
  bool first_seen = false;
  bool first_upper = false;
  bool rest_lower = true;
  for (char c : token) {
    const bool upper = c >= 'A' && c <= 'Z';
    const bool lower = c >= 'a' && c <= 'z';
    if (!upper && !lower) continue;
    any_letter = true;
    if (lower) all_upper = false;
    if (!first_seen) {
      first_seen = true;
      first_upper = upper;
    } else if (upper) {
      rest_lower = false;
    }
  }
  if (!any_letter) return ShapeClass::NumPunc;
  if (all_upper) return ShapeClass::Upper;
  if (first_upper && rest_lower) return ShapeClass::UpperFirst;
  return ShapeClass::Lower;
}

int distance_bucket(int token_index, const std::vector<Span>& anchors) {
  if (anchors.empty()) return kAbsentAnchor;
  int d = std::numeric_limits<int>::max();
  for (const auto& a : anchors) d = std::min(d, token_gap(token_index, a));
  return d / 5;
}

std::vector<FeatureRow> build_rows(const corpus::Sentence& sentence,
                                   const std::vector<Span>& anchors, const Vocab& vocab) {
  std::vector<FeatureRow> rows;
  rows.reserve(sentence.tokens.size());
  for (int i = 0; i < sentence.size(); ++i) {
    const auto& text = sentence.tokens[i].text;
    rows.push_back({vocab.word_id(text), word_shape(text), distance_bucket(i, anchors),
                    vocab.char_ids(text)});
  }
  return rows;
}

std::vector<FeatureRow> build_step1_features(const corpus::Sentence& sentence,
                                             const std::vector<Span>& label_drug_occurrences,
                                             const Vocab& vocab) {
  return build_rows(sentence, label_drug_occurrences, vocab);
}

std::vector<FeatureRow> build_step2_features(const corpus::Sentence& sentence,
                                             const Span& precipitant, const Vocab& vocab) {
  return build_rows(sentence, {precipitant}, vocab);
}

}  // namespace ddix::features
