#include "ddix/pksubtype.hpp"

#include <algorithm>
#include <limits>

#include "ddix/io.hpp"
#include "text_util.hpp"

namespace ddix::pksubtype {

namespace detail {
std::string_view seed_trend_text();
std::string_view seed_param_text();
}  // namespace detail

namespace {

// "<key>\t<value>" lines. Keys are lowercased; whitespace around either
// side is trimmed so space-separated files also work.
template <class Value, class ParseFn>
std::map<std::string, Value> parse_table(std::string_view text, ParseFn parse_value,
                                         std::string_view what) {
  std::map<std::string, Value> table;
  auto lines = ddix::detail::split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto words = ddix::detail::split_words(lines[i]);
    if (words.empty() || words[0].text.starts_with('#')) continue;
    if (words.size() != 2) {
      throw ParseError(std::string(what) + " lines need a keyword and a value", i + 1, 1);
    }
    auto value = parse_value(words[1].text);
    if (!value) {
      throw ParseError("unknown " + std::string(what) + " value '" + std::string(words[1].text) +
                           "'",
                       i + 1, words[1].column);
    }
    std::string key = ddix::detail::to_lower(words[0].text);
    auto [it, inserted] = table.emplace(key, *value);
    if (!inserted && it->second != *value) {
      throw ParseError("keyword '" + key + "' listed with two values", i + 1, 1);
    }
  }
  return table;
}

template <class Value>
std::optional<Value> first_hit(const std::vector<std::string>& tokens,
                               const std::map<std::string, Value>& table) {
  for (const auto& t : tokens) {
    auto it = table.find(ddix::detail::to_lower(t));
    if (it != table.end()) return it->second;
  }
  return std::nullopt;
}

std::string join(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& t : tokens) out += (out.empty() ? "" : " ") + t;
  return out;
}

std::vector<std::string> span_tokens(const corpus::Sentence& sentence, const Span& span) {
  std::vector<std::string> out;
  for (int i : span.tokens()) out.push_back(sentence.tokens.at(i).text);
  return out;
}

}  // namespace

std::map<std::string, Trend> parse_trend_dict(std::string_view text) {
  return parse_table<Trend>(text, parse_trend, "trend");
}

std::map<std::string, PkParameter> parse_param_dict(std::string_view text) {
  return parse_table<PkParameter>(text, parse_pk_parameter, "parameter");
}

Dictionaries Dictionaries::from_text(std::string_view trend_text, std::string_view param_text) {
  return {parse_trend_dict(trend_text), parse_param_dict(param_text)};
}

Dictionaries Dictionaries::seed() {
  static const Dictionaries seeded =
      from_text(detail::seed_trend_text(), detail::seed_param_text());
  return seeded;
}

Dictionaries Dictionaries::load(const std::string& trend_path, const std::string& param_path) {
  return from_text(read_file(trend_path), read_file(param_path));
}

std::optional<Trend> find_trend(const std::vector<std::string>& tokens, const Dictionaries& d) {
  return first_hit(tokens, d.trend);
}

std::optional<PkParameter> find_param(const std::vector<std::string>& tokens,
                                      const Dictionaries& d) {
  return first_hit(tokens, d.param);
}

Trend match_trend(const std::vector<std::string>& tokens, const Dictionaries& d) {
  if (auto t = find_trend(tokens, d)) return *t;
  throw NoTrendMatch("no trend keyword in '" + join(tokens) + "'");
}

PkParameter match_param(const std::vector<std::string>& tokens, const Dictionaries& d) {
  if (auto p = find_param(tokens, d)) return *p;
  throw NoParamMatch("no PK parameter keyword in '" + join(tokens) + "'");
}

PkObject resolve_object(const corpus::Sentence&, const Span& trigger, const Span& precipitant,
                        const std::vector<Span>& label_drug_occurrences) {
  if (label_drug_occurrences.empty()) return PkObject::ConcomitantDrug;
  int label_gap = std::numeric_limits<int>::max();
  for (const auto& occ : label_drug_occurrences) {
    label_gap = std::min(label_gap, token_gap(occ, trigger));
  }
  return label_gap <= token_gap(precipitant, trigger) ? PkObject::Drug
                                                      : PkObject::ConcomitantDrug;
}

Classification classify(const corpus::Sentence& sentence, const Span& trigger,
                        const Span& precipitant, const std::vector<Span>& label_drug_occurrences,
                        const Dictionaries& dicts) {
  const auto tokens = span_tokens(sentence, trigger);
  Classification c;
  auto trend = find_trend(tokens, dicts);
  auto param = find_param(tokens, dicts);
  c.trend_defaulted = !trend;
  c.param_defaulted = !param;
  c.subtype = {trend.value_or(Trend::Increased), param.value_or(PkParameter::Level),
               resolve_object(sentence, trigger, precipitant, label_drug_occurrences)};
  return c;
}

CodeTable CodeTable::parse(std::string_view text) {
  CodeTable table;
  auto lines = ddix::detail::split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    if (line.empty() || line.starts_with('#')) continue;
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) throw ParseError("expected '<code>\\t<id>'", i + 1, 1);
    auto subtype = PkSubtype::parse(line.substr(0, tab));
    if (!subtype) {
      throw ParseError("unknown subtype code '" + std::string(line.substr(0, tab)) + "'", i + 1,
                       1);
    }
    std::string id(line.substr(tab + 1));
    if (id.empty()) throw ParseError("empty external id", i + 1, tab + 2);
    if (!table.codes_.emplace(*subtype, id).second) {
      throw ParseError("subtype listed twice", i + 1, 1);
    }
  }
  return table;
}

CodeTable CodeTable::load(const std::string& path) { return parse(read_file(path)); }

std::string CodeTable::render(const PkSubtype& subtype) const {
  auto it = codes_.find(subtype);
  return it == codes_.end() ? subtype.code() : it->second;
}

std::vector<PkSubtype> all_subtypes() {
  std::vector<PkSubtype> out;
  for (auto t : kAllTrends) {
    for (auto p : kAllPkParameters) {
      for (auto o : kAllPkObjects) out.push_back({t, p, o});
    }
  }
  return out;
}

}  // namespace ddix::pksubtype
