#include <algorithm>
#include <map>
#include <set>

#include "ddix/corpus.hpp"
#include "record_parser.hpp"
#include "text_util.hpp"

namespace ddix::corpus {
namespace {

constexpr std::string_view kLabelDrugKind = "LabelDrug";

const detail::RecordGrammar& foreign_grammar() {
  static const detail::RecordGrammar g{
      "FDOC",
      {kLabelDrugKind, "Precipitant", "Trigger", "SpecificInteraction"},
      {"P", "T", "RT"}};
  return g;
}

}  // namespace

ForeignDocument parse_foreign_document(std::string_view blob) {
  auto raw = detail::parse_raw_document(blob, foreign_grammar());
  ForeignDocument doc;
  doc.id = std::move(raw.id);
  doc.label_drug = std::move(raw.label_drug);
  doc.label_drug_aliases = std::move(raw.aliases);
  doc.sentences = std::move(raw.sentences);
  for (auto& m : raw.mentions) {
    doc.mentions.push_back({std::move(m.id), std::move(m.kind), m.sentence, std::move(m.span),
                            m.ddi});
  }
  for (auto& in : raw.interactions) {
    ForeignInteraction out;
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
    out.real_trigger = field("RT");
    if (auto code = field("SUBTYPE")) {
      out.pk_subtype = PkSubtype::parse(*code);
      if (!out.pk_subtype) throw ParseError("bad PK subtype code '" + *code + "'", in.line, 1);
    }
    doc.interactions.push_back(std::move(out));
  }
  return doc;
}

std::vector<ForeignDocument> parse_foreign_documents(std::string_view blob) {
  std::vector<ForeignDocument> docs;
  for (auto r : detail::split_records(blob, "FDOC ")) docs.push_back(parse_foreign_document(r));
  if (docs.empty()) {
    for (auto line : detail::split_lines(blob)) {
      auto words = detail::split_words(line);
      if (!words.empty() && !words[0].text.starts_with('#')) parse_foreign_document(blob);
    }
  }
  return docs;
}

std::string serialize_foreign_document(const ForeignDocument& doc) {
  std::string out =
      detail::render_header("FDOC", doc.id, doc.label_drug, doc.label_drug_aliases);
  for (std::size_t i = 0; i < doc.sentences.size(); ++i) {
    out += detail::render_sentence(static_cast<int>(i), doc.sentences[i]);
  }
  for (const auto& m : doc.mentions) {
    out += detail::render_mention(m.id, m.kind, m.sentence, m.span, m.ddi);
  }
  for (const auto& in : doc.interactions) {
    out += "INT " + std::string(to_string(in.type)) + " P=" + in.precipitant + " T=" + in.trigger;
    if (in.real_trigger) out += " RT=" + *in.real_trigger;
    if (in.pk_subtype) out += " SUBTYPE=" + in.pk_subtype->code();
    out += '\n';
  }
  return out;
}

Document convert_nlm180(const ForeignDocument& foreign) {
  auto fail = [&](const std::string& what) -> ValidationError {
    return ValidationError("foreign document '" + foreign.id + "': " + what);
  };

  Document doc;
  doc.id = foreign.id;
  doc.label_drug = foreign.label_drug;
  doc.label_drug_aliases = foreign.label_drug_aliases;
  doc.sentences = foreign.sentences;

  std::map<std::string, const ForeignMention*, std::less<>> by_id;
  for (const auto& m : foreign.mentions) {
    if (!by_id.emplace(m.id, &m).second) throw fail("duplicate mention id " + m.id);
    if (m.sentence < 0 || m.sentence >= static_cast<int>(foreign.sentences.size())) {
      throw fail("mention " + m.id + " refers to missing sentence " + std::to_string(m.sentence));
    }
    if (auto why = check_span(m.span, foreign.sentences[m.sentence].size())) {
      throw fail("mention " + m.id + ": " + *why);
    }
  }

  // Annotated label drug mentions become aliases.
  std::set<std::string> known;
  for (const auto& n : doc.label_drug_names()) known.insert(normalize_name(n));
  for (const auto& m : foreign.mentions) {
    if (m.kind != kLabelDrugKind) continue;
    std::string text = foreign.sentences[m.sentence].span_text(m.span);
    if (known.insert(normalize_name(text)).second) doc.label_drug_aliases.push_back(text);
  }
  const auto names = doc.label_drug_names();

  struct Role {
    MentionKind kind;
    std::optional<DdiType> ddi;
  };
  std::map<std::string, Role, std::less<>> roles;
  auto assign = [&](const std::string& id, Role role) {
    auto [it, inserted] = roles.emplace(id, role);
    if (!inserted && (it->second.kind != role.kind || it->second.ddi != role.ddi)) {
      throw fail("conflicting roles for mention " + id);
    }
  };
  auto require = [&](const std::string& id) -> const ForeignMention& {
    auto it = by_id.find(id);
    if (it == by_id.end()) throw fail("dangling mention id " + id);
    if (it->second->kind == kLabelDrugKind) {
      throw fail("interaction refers to label drug mention " + id);
    }
    return *it->second;
  };

  for (const auto& in : foreign.interactions) {
    require(in.precipitant);
    assign(in.precipitant, {MentionKind::Precipitant, std::nullopt});
    require(in.trigger);
    if (in.type == DdiType::PD) {
      if (!in.real_trigger) {
        throw fail("missing PD trigger for P=" + in.precipitant + " T=" + in.trigger);
      }
      require(*in.real_trigger);
      assign(in.trigger, {MentionKind::SpecificInteraction, std::nullopt});
      assign(*in.real_trigger, {MentionKind::Trigger, DdiType::PD});
    } else {
      if (in.real_trigger) throw fail("RT= is only meaningful on PD interactions");
      assign(in.trigger, {MentionKind::Trigger, in.type});
    }
    if (in.type == DdiType::PK && !in.pk_subtype) {
      throw fail("missing PK subtype for P=" + in.precipitant);
    }
  }

  std::set<std::string, std::less<>> dropped;
  for (const auto& m : foreign.mentions) {
    if (m.kind == kLabelDrugKind) continue;
    if (matches_any_name(foreign.sentences[m.sentence], m.span, names)) {
      dropped.insert(m.id);
      continue;
    }
    Mention out{m.id, MentionKind::Precipitant, m.sentence, m.span, std::nullopt};
    if (auto it = roles.find(m.id); it != roles.end()) {
      out.kind = it->second.kind;
      out.ddi = it->second.ddi;
      if (m.ddi && out.ddi && *m.ddi != *out.ddi) {
        throw fail("mention " + m.id + " DDI disagrees with its interactions");
      }
    } else {
      auto kind = parse_mention_kind(m.kind);
      out.kind = *kind;
      if (out.kind == MentionKind::Trigger) {
        if (!m.ddi) throw fail("untyped trigger " + m.id);
        out.ddi = m.ddi;
      }
    }
    doc.mentions.push_back(std::move(out));
  }

  for (const auto& in : foreign.interactions) {
    if (dropped.count(in.precipitant) || dropped.count(in.trigger) ||
        (in.real_trigger && dropped.count(*in.real_trigger))) {
      continue;
    }
    Interaction out;
    out.type = in.type;
    out.precipitant = in.precipitant;
    if (in.type == DdiType::PD) {
      out.trigger = *in.real_trigger;
      out.specific_interaction = in.trigger;
    } else {
      out.trigger = in.trigger;
    }
    if (in.type == DdiType::PK) out.pk_subtype = in.pk_subtype;
    doc.interactions.push_back(std::move(out));
  }

  validate(doc);
  return doc;
}

ForeignDocument export_foreign(const Document& doc) {
  ForeignDocument out;
  out.id = doc.id;
  out.label_drug = doc.label_drug;
  out.label_drug_aliases = doc.label_drug_aliases;
  out.sentences = doc.sentences;

  std::set<std::string, std::less<>> pd_specific;
  std::set<std::string, std::less<>> referenced;
  for (const auto& in : doc.interactions) {
    referenced.insert(in.trigger);
    if (in.specific_interaction) {
      pd_specific.insert(*in.specific_interaction);
      referenced.insert(*in.specific_interaction);
    }
  }

  std::set<std::string, std::less<>> ids;
  for (const auto& m : doc.mentions) {
    ids.insert(m.id);
    ForeignMention fm{m.id, std::string(to_string(m.kind)), m.sentence, m.span, std::nullopt};
    if (m.kind == MentionKind::SpecificInteraction && pd_specific.count(m.id)) {
      fm.kind = "Trigger";
    }
    if (m.kind == MentionKind::Trigger && !referenced.count(m.id)) fm.ddi = m.ddi;
    out.mentions.push_back(std::move(fm));
  }

  const auto names = doc.label_drug_names();
  int counter = 0;
  for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
    for (const auto& occ : find_occurrences(doc.sentences[s], names)) {
      std::string id;
      do {
        id = "ld" + std::to_string(++counter);
      } while (ids.count(id));
      out.mentions.push_back(
          {id, std::string(kLabelDrugKind), static_cast<int>(s), occ, std::nullopt});
    }
  }

  for (const auto& in : doc.interactions) {
    ForeignInteraction fi;
    fi.type = in.type;
    fi.precipitant = in.precipitant;
    if (in.type == DdiType::PD) {
      fi.trigger = in.specific_interaction.value_or(in.trigger);
      fi.real_trigger = in.trigger;
    } else {
      fi.trigger = in.trigger;
    }
    fi.pk_subtype = in.pk_subtype;
    out.interactions.push_back(std::move(fi));
  }
  return out;
}

}  // namespace ddix::corpus
