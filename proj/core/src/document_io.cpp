#include <algorithm>
#include <charconv>

#include "ddix/corpus.hpp"
#include "record_parser.hpp"
#include "text_util.hpp"

namespace ddix::detail {
namespace {

int parse_int_word(const Word& w, std::size_t line, std::string_view what) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(w.text.data(), w.text.data() + w.text.size(), value);
  if (ec != std::errc() || ptr != w.text.data() + w.text.size() || value < 0) {
    throw ParseError("expected " + std::string(what) + ", got '" + std::string(w.text) + "'",
                     line, w.column);
  }
  return value;
}

void parse_header(const std::vector<Word>& words, std::size_t line, RawDocument& doc) {
  if (words.size() < 4 || words[2].text != "LABELDRUG") {
    throw ParseError("header must read '" + std::string(words[0].text) +
                         " <id> LABELDRUG <name> [ALIAS <name>]*'",
                     line, words.size() > 2 ? words[2].column : words[0].column);
  }
  doc.id = std::string(words[1].text);
  std::vector<std::string> names(1);
  for (std::size_t i = 3; i < words.size(); ++i) {
    if (words[i].text == "ALIAS") {
      if (names.back().empty()) throw ParseError("empty drug name", line, words[i].column);
      names.emplace_back();
      continue;
    }
    if (!names.back().empty()) names.back() += ' ';
    names.back() += words[i].text;
  }
  if (names.back().empty()) throw ParseError("empty drug name", line, words.back().column + 1);
  doc.label_drug = names.front();
  doc.aliases.assign(names.begin() + 1, names.end());
}

}  // namespace

RawDocument parse_raw_document(std::string_view blob, const RecordGrammar& grammar) {
  RawDocument doc;
  bool have_header = false;
  auto lines = split_lines(blob);
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const std::size_t line_no = li + 1;
    std::string_view line = lines[li];
    auto words = split_words(line);
    if (words.empty() || words[0].text.starts_with('#')) continue;
    std::string_view keyword = words[0].text;

    if (keyword == grammar.header) {
      if (have_header) throw ParseError("second document header in one record", line_no, 1);
      parse_header(words, line_no, doc);
      have_header = true;
      continue;
    }
    if (!have_header) {
      throw ParseError("expected '" + std::string(grammar.header) + "' header before '" +
                           std::string(keyword) + "'",
                       line_no, words[0].column);
    }

    if (keyword == "SENT") {
      if (words.size() < 2) throw ParseError("SENT needs an index", line_no, words[0].column);
      int idx = parse_int_word(words[1], line_no, "sentence index");
      if (idx != static_cast<int>(doc.sentences.size())) {
        throw ParseError("sentence index " + std::to_string(idx) + " out of order (expected " +
                             std::to_string(doc.sentences.size()) + ")",
                         line_no, words[1].column);
      }
      std::size_t text_start = words[1].column - 1 + words[1].text.size() + 1;
      std::string text = text_start <= line.size() ? std::string(line.substr(text_start)) : "";
      doc.sentences.push_back(corpus::Sentence::from_text(std::move(text)));
    } else if (keyword == "MENTION") {
      if (words.size() != 5 && words.size() != 7) {
        throw ParseError("MENTION needs <id> <kind> <sent> <fragments> [DDI <type>]", line_no,
                         words[0].column);
      }
      RawMention m;
      m.line = line_no;
      m.id = std::string(words[1].text);
      m.kind = std::string(words[2].text);
      if (std::find(grammar.kinds.begin(), grammar.kinds.end(), words[2].text) ==
          grammar.kinds.end()) {
        throw ParseError("unknown mention kind '" + m.kind + "'", line_no, words[2].column);
      }
      m.sentence = parse_int_word(words[3], line_no, "sentence index");
      try {
        m.span = Span::parse(words[4].text);
      } catch (const ParseError& e) {
        throw ParseError("bad fragment list '" + std::string(words[4].text) + "'", line_no,
                         words[4].column + (e.column() ? e.column() - 1 : 0));
      }
      if (words.size() == 7) {
        if (words[5].text != "DDI") {
          throw ParseError("expected DDI", line_no, words[5].column);
        }
        m.ddi = parse_ddi_type(words[6].text);
        if (!m.ddi) {
          throw ParseError("unknown DDI type '" + std::string(words[6].text) + "'", line_no,
                           words[6].column);
        }
      }
      doc.mentions.push_back(std::move(m));
    } else if (keyword == "INT") {
      if (words.size() < 2) throw ParseError("INT needs a type", line_no, words[0].column);
      RawInteraction in;
      in.line = line_no;
      auto type = parse_ddi_type(words[1].text);
      if (!type) {
        throw ParseError("unknown interaction type '" + std::string(words[1].text) + "'",
                         line_no, words[1].column);
      }
      in.type = *type;
      for (std::size_t i = 2; i < words.size(); ++i) {
        std::string_view w = words[i].text;
        if (w.starts_with("SUBTYPE=")) {
          // The subtype code contains spaces and runs to the end of the line.
          std::string_view rest = line.substr(words[i].column - 1 + 8);
          auto fields = split_words(rest);
          std::string code;
          for (const auto& f : fields) {
            if (!code.empty()) code += ' ';
            code += f.text;
          }
          in.fields["SUBTYPE"] = code;
          break;
        }
        std::size_t eq = w.find('=');
        if (eq == std::string_view::npos || eq == 0 || eq + 1 == w.size()) {
          throw ParseError("expected KEY=value, got '" + std::string(w) + "'", line_no,
                           words[i].column);
        }
        std::string key(w.substr(0, eq));
        if (std::find(grammar.int_fields.begin(), grammar.int_fields.end(), key) ==
            grammar.int_fields.end()) {
          throw ParseError("unknown interaction field '" + key + "'", line_no, words[i].column);
        }
        if (!in.fields.emplace(key, std::string(w.substr(eq + 1))).second) {
          throw ParseError("repeated field " + key, line_no, words[i].column);
        }
      }
      doc.interactions.push_back(std::move(in));
    } else {
      throw ParseError("unknown record '" + std::string(keyword) + "'", line_no, words[0].column);
    }
  }
  if (!have_header) {
    throw ParseError("missing '" + std::string(grammar.header) + "' header", 1, 1);
  }
  return doc;
}

std::string render_header(std::string_view keyword, const std::string& id,
                          const std::string& label_drug,
                          const std::vector<std::string>& aliases) {
  std::string out(keyword);
  out += ' ' + id + " LABELDRUG " + label_drug;
  for (const auto& a : aliases) out += " ALIAS " + a;
  out += '\n';
  return out;
}

std::string render_sentence(int index, const corpus::Sentence& sentence) {
  return "SENT " + std::to_string(index) + ' ' + sentence.text + '\n';
}

std::string render_mention(const std::string& id, std::string_view kind, int sentence,
                           const Span& span, const std::optional<DdiType>& ddi) {
  std::string out = "MENTION " + id + ' ' + std::string(kind) + ' ' + std::to_string(sentence) +
                    ' ' + span.to_string();
  if (ddi) out += " DDI " + std::string(to_string(*ddi));
  out += '\n';
  return out;
}

}  // namespace ddix::detail

namespace ddix::corpus {

namespace {

const detail::RecordGrammar& native_grammar() {
  static const detail::RecordGrammar g{
      "DOC", {"Precipitant", "Trigger", "SpecificInteraction"}, {"P", "T", "S"}};
  return g;
}

std::optional<PkSubtype> subtype_field(const detail::RawInteraction& in) {
  auto it = in.fields.find("SUBTYPE");
  if (it == in.fields.end()) return std::nullopt;
  auto st = PkSubtype::parse(it->second);
  if (!st) throw ParseError("bad PK subtype code '" + it->second + "'", in.line, 1);
  return st;
}

}  // namespace

Document parse_document(std::string_view blob) {
  auto raw = detail::parse_raw_document(blob, native_grammar());
  Document doc;
  doc.id = std::move(raw.id);
  doc.label_drug = std::move(raw.label_drug);
  doc.label_drug_aliases = std::move(raw.aliases);
  doc.sentences = std::move(raw.sentences);
  for (auto& m : raw.mentions) {
    doc.mentions.push_back(
        {std::move(m.id), *parse_mention_kind(m.kind), m.sentence, std::move(m.span), m.ddi});
  }
  for (auto& in : raw.interactions) {
    Interaction out;
    out.type = in.type;
    auto field = [&](std::string_view key) -> std::optional<std::string> {
      auto it = in.fields.find(key);
      if (it == in.fields.end()) return std::nullopt;
      return it->second;
    };
    auto p = field("P");
    auto t = field("T");
    if (!p || !t) throw ParseError("INT needs both P= and T=", in.line, 1);
    out.precipitant = *p;
    out.trigger = *t;
    out.specific_interaction = field("S");
    out.pk_subtype = subtype_field(in);
    doc.interactions.push_back(std::move(out));
  }
  validate(doc);
  return doc;
}

std::vector<Document> parse_documents(std::string_view blob) {
  std::vector<Document> docs;
  auto records = detail::split_records(blob, "DOC ");
  if (records.empty()) {
    for (auto line : detail::split_lines(blob)) {
      auto words = detail::split_words(line);
      if (!words.empty() && !words[0].text.starts_with('#')) {
        parse_document(blob);  // reports the missing header
      }
    }
    return docs;
  }
  for (auto r : records) docs.push_back(parse_document(r));
  return docs;
}

std::string serialize_document(const Document& doc) {
  std::string out = detail::render_header("DOC", doc.id, doc.label_drug, doc.label_drug_aliases);
  for (std::size_t i = 0; i < doc.sentences.size(); ++i) {
    out += detail::render_sentence(static_cast<int>(i), doc.sentences[i]);
  }
  for (const auto& m : doc.mentions) {
    out += detail::render_mention(m.id, to_string(m.kind), m.sentence, m.span, m.ddi);
  }
  for (const auto& in : doc.interactions) {
    out += "INT " + std::string(to_string(in.type)) + " P=" + in.precipitant + " T=" + in.trigger;
    if (in.specific_interaction) out += " S=" + *in.specific_interaction;
    if (in.pk_subtype) out += " SUBTYPE=" + in.pk_subtype->code();
    out += '\n';
  }
  return out;
}

}  // namespace ddix::corpus
