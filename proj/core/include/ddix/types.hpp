#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ddix {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text. Line and column are 1-based; 0 means unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// Well-formed data that breaks a domain invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

enum class MentionKind { Precipitant, Trigger, SpecificInteraction };
enum class DdiType { PK, PD, UN };

inline constexpr DdiType kAllDdiTypes[] = {DdiType::PK, DdiType::PD, DdiType::UN};

std::string_view to_string(MentionKind kind);
std::string_view to_string(DdiType type);
std::optional<MentionKind> parse_mention_kind(std::string_view text);
std::optional<DdiType> parse_ddi_type(std::string_view text);

// Inclusive token range.
struct Fragment {
  int first = 0;
  int last = 0;

  int size() const { return last - first + 1; }
  friend auto operator<=>(const Fragment&, const Fragment&) = default;
};

// A possibly discontinuous run of tokens. Canonical form: fragments sorted,
// non-empty, disjoint and non-adjacent.
class Span {
 public:
  Span() = default;
  explicit Span(std::vector<Fragment> fragments);
  static Span contiguous(int first, int last);
  // Builds the canonical span covering exactly the given token indices.
  static Span from_tokens(std::vector<int> token_indices);

  const std::vector<Fragment>& fragments() const { return fragments_; }
  bool empty() const { return fragments_.empty(); }
  bool is_contiguous() const { return fragments_.size() == 1; }
  int first() const { return fragments_.front().first; }
  int last() const { return fragments_.back().last; }
  int token_count() const;
  bool contains(int token) const;
  bool overlaps(const Span& other) const;
  std::vector<int> tokens() const;

  // Renders as "a-b[,c-d]*".
  std::string to_string() const;
  // Accepts the to_string() form. Throws ParseError (column relative to text).
  static Span parse(std::string_view text);

  friend auto operator<=>(const Span&, const Span&) = default;
  friend bool operator==(const Span&, const Span&) = default;

 private:
  std::vector<Fragment> fragments_;
};

// Checks the canonical-form invariant. Returns an explanation on failure.
std::optional<std::string> check_span(const Span& span, int token_count);

// Number of tokens strictly between the closest pair of tokens of a and b;
// 0 when they touch or overlap.
int token_gap(const Span& a, const Span& b);
int token_gap(int token, const Span& span);

}  // namespace ddix
