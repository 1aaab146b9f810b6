#include "ddix/types.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <limits>

#include "ddix/subtype.hpp"

namespace ddix {

ParseError::ParseError(const std::string& message, std::size_t line, std::size_t column)
    : Error(line == 0 ? message
                      : "line " + std::to_string(line) + ", column " + std::to_string(column) +
                            ": " + message),
      line_(line),
      column_(column) {}

std::string_view to_string(MentionKind kind) {
  switch (kind) {
    case MentionKind::Precipitant: return "Precipitant";
    case MentionKind::Trigger: return "Trigger";
    case MentionKind::SpecificInteraction: return "SpecificInteraction";
  }
  return "?";
}

std::string_view to_string(DdiType type) {
  switch (type) {
    case DdiType::PK: return "PK";
    case DdiType::PD: return "PD";
    case DdiType::UN: return "UN";
  }
  return "?";
}

std::optional<MentionKind> parse_mention_kind(std::string_view text) {
  if (text == "Precipitant") return MentionKind::Precipitant;
  if (text == "Trigger") return MentionKind::Trigger;
  if (text == "SpecificInteraction") return MentionKind::SpecificInteraction;
  return std::nullopt;
}

std::optional<DdiType> parse_ddi_type(std::string_view text) {
  if (text == "PK") return DdiType::PK;
  if (text == "PD") return DdiType::PD;
  if (text == "UN") return DdiType::UN;
  return std::nullopt;
}

// ---------------------------------------------------------------------------

Span::Span(std::vector<Fragment> fragments) : fragments_(std::move(fragments)) {}

Span Span::contiguous(int first, int last) { return Span({Fragment{first, last}}); }

Span Span::from_tokens(std::vector<int> token_indices) {
  std::sort(token_indices.begin(), token_indices.end());
  token_indices.erase(std::unique(token_indices.begin(), token_indices.end()),
                      token_indices.end());
  std::vector<Fragment> fragments;
  for (int t : token_indices) {
    if (!fragments.empty() && fragments.back().last + 1 == t) {
      fragments.back().last = t;
    } else {
      fragments.push_back({t, t});
    }
  }
  return Span(std::move(fragments));
}

int Span::token_count() const {
  int n = 0;
  for (const auto& f : fragments_) n += f.size();
  return n;
}

bool Span::contains(int token) const {
  for (const auto& f : fragments_) {
    if (token >= f.first && token <= f.last) return true;
  }
  return false;
}

bool Span::overlaps(const Span& other) const {
  for (const auto& a : fragments_) {
    for (const auto& b : other.fragments_) {
      if (a.first <= b.last && b.first <= a.last) return true;
    }
  }
  return false;
}

std::vector<int> Span::tokens() const {
  std::vector<int> out;
  out.reserve(token_count());
  for (const auto& f : fragments_) {
    for (int t = f.first; t <= f.last; ++t) out.push_back(t);
  }
  return out;
}

std::string Span::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < fragments_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(fragments_[i].first);
    out += '-';
    out += std::to_string(fragments_[i].last);
  }
  return out;
}

namespace {

int parse_index(std::string_view text, std::size_t column) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || value < 0) {
    throw ParseError("bad token index '" + std::string(text) + "'", 0, column);
  }
  return value;
}

}  // namespace

Span Span::parse(std::string_view text) {
  std::vector<Fragment> fragments;
  std::size_t pos = 0;
  while (true) {
    std::size_t comma = text.find(',', pos);
    std::string_view piece =
        text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    std::size_t dash = piece.find('-');
    if (dash == std::string_view::npos) {
      throw ParseError("fragment '" + std::string(piece) + "' is not of the form a-b", 0,
                       pos + 1);
    }
    Fragment f{parse_index(piece.substr(0, dash), pos + 1),
               parse_index(piece.substr(dash + 1), pos + dash + 2)};
    fragments.push_back(f);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return Span(std::move(fragments));
}

std::optional<std::string> check_span(const Span& span, int token_count) {
  const auto& fr = span.fragments();
  if (fr.empty()) return "span has no fragments";
  for (std::size_t i = 0; i < fr.size(); ++i) {
    if (fr[i].first > fr[i].last) {
      return "fragment " + std::to_string(fr[i].first) + "-" + std::to_string(fr[i].last) +
             " is reversed";
    }
    if (fr[i].first < 0 || fr[i].last >= token_count) {
      return "fragment " + std::to_string(fr[i].first) + "-" + std::to_string(fr[i].last) +
             " is outside the sentence (" + std::to_string(token_count) + " tokens)";
    }
    if (i > 0 && fr[i].first <= fr[i - 1].last + 1) {
      return "fragments of " + span.to_string() + " are unsorted, overlapping or adjacent";
    }
  }
  return std::nullopt;
}

int token_gap(int token, const Span& span) {
  int best = std::numeric_limits<int>::max();
  for (const auto& f : span.fragments()) {
    int gap = 0;
    if (token < f.first) {
      gap = f.first - token - 1;
    } else if (token > f.last) {
      gap = token - f.last - 1;
    }
    best = std::min(best, gap);
  }
  return best;
}

int token_gap(const Span& a, const Span& b) {
  int best = std::numeric_limits<int>::max();
  for (const auto& fa : a.fragments()) {
    for (const auto& fb : b.fragments()) {
      int gap = 0;
      if (fa.last < fb.first) {
        gap = fb.first - fa.last - 1;
      } else if (fb.last < fa.first) {
        gap = fa.first - fb.last - 1;
      }
      best = std::min(best, gap);
    }
  }
  return best;
}

// ---------------------------------------------------------------------------

std::string_view to_string(Trend trend) {
  return trend == Trend::Increased ? "INCREASED" : "DECREASED";
}

std::string_view to_string(PkParameter parameter) {
  switch (parameter) {
    case PkParameter::Auc: return "AUC";
    case PkParameter::Cmax: return "CMAX";
    case PkParameter::HalfLife: return "HALF_LIFE";
    case PkParameter::Level: return "LEVEL";
    case PkParameter::Tmax: return "TMAX";
  }
  return "?";
}

std::string_view to_string(PkObject object) {
  return object == PkObject::Drug ? "DRUG" : "CONCOMITANT_DRUG";
}

std::optional<Trend> parse_trend(std::string_view text) {
  for (Trend t : kAllTrends) {
    if (to_string(t) == text) return t;
  }
  return std::nullopt;
}

std::optional<PkParameter> parse_pk_parameter(std::string_view text) {
  for (PkParameter p : kAllPkParameters) {
    if (to_string(p) == text) return p;
  }
  return std::nullopt;
}

std::optional<PkObject> parse_pk_object(std::string_view text) {
  for (PkObject o : kAllPkObjects) {
    if (to_string(o) == text) return o;
  }
  return std::nullopt;
}

std::string PkSubtype::code() const {
  std::string out(to_string(trend));
  out += ' ';
  out += to_string(parameter);
  out += " OF ";
  out += to_string(object);
  return out;
}

std::optional<PkSubtype> PkSubtype::parse(std::string_view code) {
  std::vector<std::string_view> words;
  std::size_t pos = 0;
  while (pos < code.size()) {
    std::size_t space = code.find(' ', pos);
    if (space == std::string_view::npos) space = code.size();
    if (space > pos) words.push_back(code.substr(pos, space - pos));
    pos = space + 1;
  }
  if (words.size() != 4 || words[2] != "OF") return std::nullopt;
  auto trend = parse_trend(words[0]);
  auto parameter = parse_pk_parameter(words[1]);
  auto object = parse_pk_object(words[3]);
  if (!trend || !parameter || !object) return std::nullopt;
  return PkSubtype{*trend, *parameter, *object};
}

}  // namespace ddix
