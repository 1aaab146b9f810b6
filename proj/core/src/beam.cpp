#include <algorithm>

#include "ddix/tagger.hpp"
#include "tagger_internal.hpp"

namespace ddix::tagger {

namespace {

// Log-probabilities per (step, previous label), computed on first use.
class StepScorer {
 public:
  StepScorer(const TaggerModel& model, const Rows& rows)
      : tables_(detail::step_tables(model, rows)),
        prev_count_(model.start_label() + 1),
        cache_(static_cast<std::size_t>(tables_.base.cols()) * prev_count_) {}

  int length() const { return static_cast<int>(tables_.base.cols()); }

  const Eigen::VectorXd& row(int t, int prev) {
    auto& slot = cache_[static_cast<std::size_t>(t) * prev_count_ + prev];
    if (slot.size() == 0) {
      slot = detail::log_softmax(tables_.base.col(t) + tables_.label_part.col(prev));
    }
    return slot;
  }

 private:
  detail::StepTables tables_;
  int prev_count_;
  std::vector<Eigen::VectorXd> cache_;
};

struct Hypothesis {
  double score = 0.0;
  std::vector<int> tags;
};

bool better(const Hypothesis& a, const Hypothesis& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.tags < b.tags;
}

}  // namespace

BeamResult beam_decode(const TaggerModel& model, const Rows& rows, int beam_size,
                       LabelSet label_set) {
  if (beam_size < 1) throw Error("beam_decode: beam size must be at least 1");
  if (rows.empty()) return {};
  StepScorer scorer(model, rows);
  const int labels =
      label_set == LabelSet::Alphabet ? model.alphabet_size() : model.output_size();
  std::vector<Hypothesis> beam{Hypothesis{}};
  for (int t = 0; t < scorer.length(); ++t) {
    std::vector<Hypothesis> next;
    next.reserve(beam.size() * labels);
    for (const auto& h : beam) {
      const int prev = h.tags.empty() ? model.start_label() : h.tags.back();
      const auto& logp = scorer.row(t, prev);
      for (int y = 0; y < labels; ++y) {
        Hypothesis c{h.score + logp(y), h.tags};
        c.tags.push_back(y);
        next.push_back(std::move(c));
      }
    }
    const std::size_t keep = std::min<std::size_t>(next.size(), beam_size);
    std::partial_sort(next.begin(), next.begin() + keep, next.end(), better);
    next.resize(keep);
    beam = std::move(next);
  }
  return {std::move(beam.front().tags), beam.front().score};
}

double score_sequence(const TaggerModel& model, const Rows& rows, const std::vector<int>& tags) {
  if (tags.size() != rows.size()) {
    throw Error("score_sequence: " + std::to_string(tags.size()) + " tags for " +
                std::to_string(rows.size()) + " tokens");
  }
  if (rows.empty()) return 0.0;
  for (int y : tags) {
    if (y < 0 || y >= model.output_size()) {
      throw Error("score_sequence: tag id " + std::to_string(y) + " out of range");
    }
  }
  StepScorer scorer(model, rows);
  double score = 0.0;
  int prev = model.start_label();
  for (int t = 0; t < scorer.length(); ++t) {
    score = score + scorer.row(t, prev)(tags[t]);
    prev = tags[t];
  }
  return score;
}

}  // namespace ddix::tagger
