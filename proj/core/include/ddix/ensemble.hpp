#pragma once

#include <vector>

#include "ddix/tagger.hpp"

namespace ddix::ensemble {

struct EnsembleConfig {
  int beam_size = 8;
  tagger::LabelSet labels = tagger::LabelSet::Alphabet;
};

struct ScoredProposal {
  int source_model = 0;              // 0-based index of the first model proposing it
  std::vector<int> merged_from;      // later models that proposed the same sequence
  std::vector<int> sequence;
  std::vector<double> per_model_scores;  // score_sequence under each model, in model order
  double total = 0.0;
};

struct EnsembleResult {
  std::vector<int> sequence;  // the winner
  int winner = 0;             // index into proposals
  std::vector<ScoredProposal> proposals;
};

// Every model proposes its beam-best sequence, every model scores every
// distinct proposal, and the largest summed score wins. Equal totals go to
// the proposal from the lower model index. `rows[j]` are model j's features,
// so members with separate vocabularies can be combined.
EnsembleResult ensemble_decode(const std::vector<const tagger::TaggerModel*>& models,
                               const std::vector<tagger::Rows>& rows,
                               const EnsembleConfig& config = {});

// Shared-feature convenience form.
EnsembleResult ensemble_decode(const std::vector<const tagger::TaggerModel*>& models,
                               const tagger::Rows& rows, const EnsembleConfig& config = {});

}  // namespace ddix::ensemble
