#include <algorithm>
#include <set>

#include "ddix/corpus.hpp"
#include "text_util.hpp"

namespace ddix::corpus {

const Mention* Document::find_mention(std::string_view mention_id) const {
  for (const auto& m : mentions) {
    if (m.id == mention_id) return &m;
  }
  return nullptr;
}

std::vector<std::string> Document::label_drug_names() const {
  std::vector<std::string> names;
  names.reserve(1 + label_drug_aliases.size());
  names.push_back(label_drug);
  names.insert(names.end(), label_drug_aliases.begin(), label_drug_aliases.end());
  return names;
}

std::string normalize_name(std::string_view name) {
  std::string out;
  for (const auto& w : detail::split_words(name)) {
    if (!out.empty()) out += ' ';
    out += detail::to_lower(w.text);
  }
  return out;
}

namespace {

bool has_space(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char c) { return detail::is_space(c); });
}

std::vector<std::vector<std::string>> name_token_lists(const std::vector<std::string>& names) {
  std::vector<std::vector<std::string>> lists;
  for (const auto& name : names) {
    std::vector<std::string> toks;
    for (const auto& t : tokenize(name)) toks.push_back(detail::to_lower(t.text));
    if (!toks.empty()) lists.push_back(std::move(toks));
  }
  return lists;
}

}  // namespace

std::vector<Span> find_occurrences(const Sentence& sentence,
                                   const std::vector<std::string>& names) {
  const auto lists = name_token_lists(names);
  std::vector<std::string> lowered;
  lowered.reserve(sentence.tokens.size());
  for (const auto& t : sentence.tokens) lowered.push_back(detail::to_lower(t.text));

  std::vector<Span> hits;
  int n = static_cast<int>(lowered.size());
  int i = 0;
  while (i < n) {
    int best = 0;
    for (const auto& toks : lists) {
      int len = static_cast<int>(toks.size());
      if (len <= best || i + len > n) continue;
      if (std::equal(toks.begin(), toks.end(), lowered.begin() + i)) best = len;
    }
    if (best > 0) {
      hits.push_back(Span::contiguous(i, i + best - 1));
      i += best;
    } else {
      ++i;
    }
  }
  return hits;
}

bool matches_any_name(const Sentence& sentence, const Span& span,
                      const std::vector<std::string>& names) {
  std::string text = normalize_name(sentence.span_text(span));
  for (const auto& toks : name_token_lists(names)) {
    std::string joined;
    for (const auto& t : toks) {
      if (!joined.empty()) joined += ' ';
      joined += t;
    }
    if (joined == text) return true;
  }
  return false;
}

namespace {

[[noreturn]] void fail_document(const Document& doc, const std::string& what) {
  throw ValidationError("document '" + doc.id + "': " + what);
}

}  // namespace

void validate(const Document& doc) {
  if (doc.id.empty() || has_space(doc.id)) fail_document(doc, "document id must be a non-empty word");
  for (const auto& name : doc.label_drug_names()) {
    auto words = detail::split_words(name);
    if (words.empty()) fail_document(doc, "empty label drug name");
    std::string collapsed;
    for (const auto& w : words) {
      if (w.text == "ALIAS" || w.text == "LABELDRUG") {
        fail_document(doc, "label drug name '" + name + "' contains a reserved word");
      }
      if (!collapsed.empty()) collapsed += ' ';
      collapsed += w.text;
    }
    if (collapsed != name) {
      fail_document(doc, "label drug name '" + name + "' has irregular whitespace");
    }
  }
  for (const auto& s : doc.sentences) {
    if (s.text.find('\n') != std::string::npos) fail_document(doc, "sentence text contains a newline");
  }

  std::set<std::string_view> ids;
  for (const auto& m : doc.mentions) {
    if (m.id.empty() || has_space(m.id) || m.id.find('=') != std::string::npos) {
      fail_document(doc, "bad mention id '" + m.id + "'");
    }
    if (!ids.insert(m.id).second) fail_document(doc, "duplicate mention id " + m.id);
    if (m.sentence < 0 || m.sentence >= static_cast<int>(doc.sentences.size())) {
      fail_document(doc, "mention " + m.id + " refers to missing sentence " + std::to_string(m.sentence));
    }
    if (auto why = check_span(m.span, doc.sentences[m.sentence].size())) {
      fail_document(doc, "mention " + m.id + ": " + *why);
    }
    if (m.kind == MentionKind::Trigger && !m.ddi) fail_document(doc, "trigger " + m.id + " has no DDI type");
    if (m.kind != MentionKind::Trigger && m.ddi) {
      fail_document(doc, "mention " + m.id + " of kind " + std::string(to_string(m.kind)) +
           " carries a DDI type");
    }
  }

  for (const auto& in : doc.interactions) {
    auto lookup = [&](const std::string& id, MentionKind expected) -> const Mention& {
      const Mention* m = doc.find_mention(id);
      if (!m) fail_document(doc, "dangling mention id " + id);
      if (m->kind != expected) {
        fail_document(doc, "mention " + id + " is a " + std::string(to_string(m->kind)) + ", expected " +
             std::string(to_string(expected)));
      }
      return *m;
    };
    const Mention& p = lookup(in.precipitant, MentionKind::Precipitant);
    const Mention& t = lookup(in.trigger, MentionKind::Trigger);
    if (t.ddi != in.type) {
      fail_document(doc, "interaction type " + std::string(to_string(in.type)) + " disagrees with trigger " +
           t.id);
    }
    if (p.sentence != t.sentence) fail_document(doc, "interaction spans sentences (" + p.id + ", " + t.id + ")");
    if (in.type == DdiType::PD) {
      if (!in.specific_interaction) fail_document(doc, "PD interaction without specific interaction");
      const Mention& s = lookup(*in.specific_interaction, MentionKind::SpecificInteraction);
      if (s.sentence != p.sentence) fail_document(doc, "interaction spans sentences (" + p.id + ", " + s.id + ")");
    } else if (in.specific_interaction) {
      fail_document(doc, "non-PD interaction carries a specific interaction");
    }
    if (in.type == DdiType::PK && !in.pk_subtype) fail_document(doc, "PK interaction without subtype");
    if (in.type != DdiType::PK && in.pk_subtype) fail_document(doc, "non-PK interaction carries a PK subtype");
  }
}

}  // namespace ddix::corpus
