#include "ddix/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <tuple>

namespace ddix::eval {

namespace {

template <class Key>
MatchCounts count_matches(const std::vector<Key>& gold, const std::vector<Key>& pred) {
  std::map<Key, long> g, p;
  for (const auto& k : gold) ++g[k];
  for (const auto& k : pred) ++p[k];
  MatchCounts c;
  for (const auto& [k, n] : g) {
    auto it = p.find(k);
    const long m = it == p.end() ? 0 : it->second;
    c.tp += std::min(n, m);
  }
  c.fn = static_cast<long>(gold.size()) - c.tp;
  c.fp = static_cast<long>(pred.size()) - c.tp;
  return c;
}

using MentionKey = std::tuple<MentionKind, int, Span>;

std::vector<MentionKey> mention_keys(const std::vector<corpus::Mention>& ms,
                                     std::optional<MentionKind> kind) {
  std::vector<MentionKey> keys;
  for (const auto& m : ms) {
    if (!kind || m.kind == *kind) keys.emplace_back(m.kind, m.sentence, m.span);
  }
  return keys;
}

using InteractionKey = std::tuple<int, Span, DdiType, std::optional<PkSubtype>>;

std::vector<InteractionKey> interaction_keys(const corpus::Document& doc, bool lenient_pk) {
  std::vector<InteractionKey> keys;
  for (const auto& in : doc.interactions) {
    const auto* p = doc.find_mention(in.precipitant);
    if (!p) throw ValidationError(doc.id + ": dangling mention id " + in.precipitant);
    std::optional<PkSubtype> subtype;
    if (!lenient_pk && in.type == DdiType::PK) subtype = in.pk_subtype;
    keys.emplace_back(p->sentence, p->span, in.type, subtype);
  }
  return keys;
}

std::string kind_label(MentionKind k) { return std::string(to_string(k)); }

std::vector<std::pair<std::string, MatchCounts>> rows_of(const Scores& s) {
  std::vector<std::pair<std::string, MatchCounts>> rows;
  for (auto k : {MentionKind::Precipitant, MentionKind::Trigger,
                 MentionKind::SpecificInteraction}) {
    auto it = s.mentions.find(k);
    rows.emplace_back(kind_label(k), it == s.mentions.end() ? MatchCounts{} : it->second);
  }
  rows.emplace_back("Task1 (mentions, micro)", s.mentions_micro);
  rows.emplace_back("Task2 (interactions)", s.interactions);
  rows.emplace_back("Task2 (lenient PK)", s.interactions_lenient);
  return rows;
}

}  // namespace

Prf f1(const MatchCounts& c) {
  Prf r;
  if (c.tp + c.fp > 0) r.precision = static_cast<double>(c.tp) / (c.tp + c.fp);
  if (c.tp + c.fn > 0) r.recall = static_cast<double>(c.tp) / (c.tp + c.fn);
  if (r.precision + r.recall > 0) r.f = 2 * r.precision * r.recall / (r.precision + r.recall);
  return r;
}

MatchCounts match_mentions(const std::vector<corpus::Mention>& gold,
                           const std::vector<corpus::Mention>& pred) {
  return count_matches(mention_keys(gold, std::nullopt), mention_keys(pred, std::nullopt));
}

MatchCounts match_mentions(const std::vector<corpus::Mention>& gold,
                           const std::vector<corpus::Mention>& pred, MentionKind kind) {
  return count_matches(mention_keys(gold, kind), mention_keys(pred, kind));
}

MatchCounts match_interactions(const corpus::Document& gold, const corpus::Document& pred,
                               bool lenient_pk) {
  return count_matches(interaction_keys(gold, lenient_pk), interaction_keys(pred, lenient_pk));
}

Scores& Scores::operator+=(const Scores& o) {
  for (const auto& [k, c] : o.mentions) mentions[k] += c;
  mentions_micro += o.mentions_micro;
  interactions += o.interactions;
  interactions_lenient += o.interactions_lenient;
  return *this;
}

Scores score_document(const corpus::Document& gold, const corpus::Document& pred) {
  Scores s;
  for (auto k : {MentionKind::Precipitant, MentionKind::Trigger,
                 MentionKind::SpecificInteraction}) {
    s.mentions[k] = match_mentions(gold.mentions, pred.mentions, k);
    s.mentions_micro += s.mentions[k];
  }
  s.interactions = match_interactions(gold, pred, false);
  s.interactions_lenient = match_interactions(gold, pred, true);
  return s;
}

Scores score_corpus(const std::vector<corpus::Document>& gold,
                    const std::vector<corpus::Document>& pred) {
  std::map<std::string, const corpus::Document*> by_id;
  for (const auto& d : pred) {
    if (!by_id.emplace(d.id, &d).second) {
      throw ValidationError("duplicate predicted document " + d.id);
    }
  }
  std::set<std::string> gold_ids;
  Scores total;
  for (const auto& g : gold) {
    if (!gold_ids.insert(g.id).second) throw ValidationError("duplicate gold document " + g.id);
    auto it = by_id.find(g.id);
    if (it == by_id.end()) {
      corpus::Document empty;
      empty.id = g.id;
      total += score_document(g, empty);
    } else {
      total += score_document(g, *it->second);
    }
  }
  for (const auto& d : pred) {
    if (!gold_ids.count(d.id)) throw ValidationError("prediction for unknown document " + d.id);
  }
  return total;
}

std::string format_table(const Scores& scores) {
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-26s %6s %6s %6s %9s %9s %9s\n", "category", "tp", "fp", "fn",
                "precision", "recall", "F");
  out += buf;
  for (const auto& [name, c] : rows_of(scores)) {
    const Prf p = f1(c);
    std::snprintf(buf, sizeof buf, "%-26s %6ld %6ld %6ld %9.4f %9.4f %9.4f\n", name.c_str(), c.tp,
                  c.fp, c.fn, p.precision, p.recall, p.f);
    out += buf;
  }
  return out;
}

std::string format_csv(const Scores& scores) {
  std::string out = "category,tp,fp,fn,precision,recall,f\n";
  char buf[200];
  for (const auto& [name, c] : rows_of(scores)) {
    const Prf p = f1(c);
    std::snprintf(buf, sizeof buf, "%s,%ld,%ld,%ld,%.6f,%.6f,%.6f\n", name.c_str(), c.tp, c.fp,
                  c.fn, p.precision, p.recall, p.f);
    out += buf;
  }
  return out;
}

}  // namespace ddix::eval
