#include "ddix/ensemble.hpp"

#include <algorithm>

namespace ddix::ensemble {

EnsembleResult ensemble_decode(const std::vector<const tagger::TaggerModel*>& models,
                               const std::vector<tagger::Rows>& rows,
                               const EnsembleConfig& config) {
  if (models.empty()) throw Error("ensemble: no models");
  if (rows.size() != models.size()) throw Error("ensemble: one feature list per model required");
  if (config.beam_size < 1) throw Error("ensemble: beam size must be at least 1");
  for (std::size_t j = 0; j < models.size(); ++j) {
    if (!models[j]) throw Error("ensemble: null model");
    if (!(models[j]->scheme() == models.front()->scheme()) ||
        models[j]->output_size() != models.front()->output_size()) {
      throw Error("ensemble: models use different tag alphabets");
    }
    if (rows[j].size() != rows.front().size()) {
      throw Error("ensemble: feature lists differ in length");
    }
  }

  EnsembleResult result;
  for (std::size_t i = 0; i < models.size(); ++i) {
    auto best = tagger::beam_decode(*models[i], rows[i], config.beam_size, config.labels);
    auto same = std::find_if(result.proposals.begin(), result.proposals.end(),
                             [&](const ScoredProposal& p) { return p.sequence == best.tags; });
    if (same != result.proposals.end()) {
      same->merged_from.push_back(static_cast<int>(i));
      continue;
    }
    ScoredProposal p;
    p.source_model = static_cast<int>(i);
    p.sequence = std::move(best.tags);
    result.proposals.push_back(std::move(p));
  }
  for (auto& p : result.proposals) {
    for (std::size_t j = 0; j < models.size(); ++j) {
      p.per_model_scores.push_back(tagger::score_sequence(*models[j], rows[j], p.sequence));
      p.total += p.per_model_scores.back();
    }
  }
  for (std::size_t k = 1; k < result.proposals.size(); ++k) {
    if (result.proposals[k].total > result.proposals[result.winner].total) {
      result.winner = static_cast<int>(k);
    }
  }
  result.sequence = result.proposals[result.winner].sequence;
  return result;
}

EnsembleResult ensemble_decode(const std::vector<const tagger::TaggerModel*>& models,
                               const tagger::Rows& rows, const EnsembleConfig& config) {
  return ensemble_decode(models, std::vector<tagger::Rows>(models.size(), rows), config);
}

}  // namespace ddix::ensemble
