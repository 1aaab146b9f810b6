#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ddix/corpus.hpp"

namespace ddix::eval {

struct MatchCounts {
  long tp = 0;
  long fp = 0;
  long fn = 0;

  long gold() const { return tp + fn; }
  long predicted() const { return tp + fp; }
  MatchCounts& operator+=(const MatchCounts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  friend bool operator==(const MatchCounts&, const MatchCounts&) = default;
};

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f = 0.0;
};

// Zero denominators give zero.
Prf f1(const MatchCounts& counts);

// Exact match on (kind, sentence, fragments); one-to-one.
MatchCounts match_mentions(const std::vector<corpus::Mention>& gold,
                           const std::vector<corpus::Mention>& pred);
MatchCounts match_mentions(const std::vector<corpus::Mention>& gold,
                           const std::vector<corpus::Mention>& pred, MentionKind kind);

// Key: (sentence, precipitant span, type), plus the PK subtype unless lenient.
MatchCounts match_interactions(const corpus::Document& gold, const corpus::Document& pred,
                               bool lenient_pk = false);

struct Scores {
  std::map<MentionKind, MatchCounts> mentions;
  MatchCounts mentions_micro;
  MatchCounts interactions;          // strict
  MatchCounts interactions_lenient;  // PK subtype ignored

  Scores& operator+=(const Scores& o);
};

Scores score_document(const corpus::Document& gold, const corpus::Document& pred);

// Documents pair up by id. A gold document without a prediction counts as an
// empty prediction; a prediction without gold is a ValidationError.
Scores score_corpus(const std::vector<corpus::Document>& gold,
                    const std::vector<corpus::Document>& pred);

// Aligned human-readable table and "category,tp,fp,fn,precision,recall,f" CSV.
std::string format_table(const Scores& scores);
std::string format_csv(const Scores& scores);

}  // namespace ddix::eval
