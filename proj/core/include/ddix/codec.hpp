#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ddix/types.hpp"

namespace ddix::codec {

enum class Variant { BIO, BIOHD, BIOHD_DDI };

std::string_view to_string(Variant variant);
std::optional<Variant> parse_variant(std::string_view text);

// A label alphabet. Order is fixed: it indexes tagger outputs and breaks
// ties in beam search, so it must never change between releases.
//   BIO       : B I O
//   BIOHD     : B I H-B H-I D-B D-I O
//   BIOHD_DDI : each of B I H-B H-I D-B D-I crossed with PK PD UN, then O
class TagScheme {
 public:
  explicit TagScheme(Variant variant);

  Variant variant() const { return variant_; }
  const std::vector<std::string>& alphabet() const { return alphabet_; }
  int size() const { return static_cast<int>(alphabet_.size()); }
  int outside_id() const { return size() - 1; }

  // -1 when the tag is not in the alphabet.
  int index_of(std::string_view tag) const;
  const std::string& tag(int id) const { return alphabet_.at(id); }

  std::vector<int> to_ids(const std::vector<std::string>& tags) const;
  std::vector<std::string> to_tags(const std::vector<int>& ids) const;

  friend bool operator==(const TagScheme& a, const TagScheme& b) {
    return a.variant_ == b.variant_;
  }

 private:
  Variant variant_;
  std::vector<std::string> alphabet_;
};

using TagSequence = std::vector<std::string>;

// A mention as the codec sees it: where it is and, for the DDI scheme, its type.
struct TaggedSpan {
  Span span;
  std::optional<DdiType> ddi;

  friend auto operator<=>(const TaggedSpan&, const TaggedSpan&) = default;
  friend bool operator==(const TaggedSpan&, const TaggedSpan&) = default;
};

// Thrown by encode when the tag sequence could not be decoded back into the
// same mention set (e.g. one token shared three ways along a chain).
class UnrepresentableError : public Error {
 public:
  using Error::Error;
};

// "B" + PK -> "B-PK". Throws Error for "O" or unknown base tags.
std::string fine_tag(std::string_view base, DdiType ddi);
// "H-I-PD" -> ("H-I", PD); "O" -> ("O", nullopt). Throws Error when malformed.
std::pair<std::string, std::optional<DdiType>> split_fine_tag(std::string_view tag);

// Tags one token per position. Shared tokens get D-*, the remaining tokens
// of overlapping or discontinuous mentions get H-*, everything else B/I/O.
// Within one H portion the first token is H-B and later ones (even across a
// gap) are H-I. Throws UnrepresentableError when decode would not invert it.
TagSequence encode(int token_count, std::vector<TaggedSpan> mentions, const TagScheme& scheme);

// Total inverse of encode. Malformed sequences are repaired: an I or H-I or
// D-I with nothing to continue opens a new segment, unpaired H and D segments
// become standalone mentions, a mention's DDI type is the majority over its
// tokens (ties go to PK, then PD), and if the result is still not
// representable the mentions causing it are dropped. The output is sorted.
std::vector<TaggedSpan> decode(const TagSequence& tags, const TagScheme& scheme);
std::vector<TaggedSpan> decode_ids(const std::vector<int>& ids, const TagScheme& scheme);

// encode() that drops mentions until the remainder is representable.
// Dropped mentions are appended to `dropped` when it is non-null.
TagSequence encode_lenient(int token_count, std::vector<TaggedSpan> mentions,
                           const TagScheme& scheme,
                           std::vector<TaggedSpan>* dropped = nullptr);

}  // namespace ddix::codec
