#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ddix/codec.hpp"
#include "ddix/corpus.hpp"
#include "ddix/ensemble.hpp"
#include "ddix/features.hpp"
#include "ddix/pksubtype.hpp"
#include "ddix/tagger.hpp"

namespace ddix::pipeline {

// What a tagger sees: the sentence, where it sits, and the anchor spans
// its position features are measured from.
struct TaggingQuery {
  const corpus::Document* document = nullptr;
  int sentence_index = 0;
  const corpus::Sentence* sentence = nullptr;
  std::vector<Span> anchors;
};

class SequenceTagger {
 public:
  virtual ~SequenceTagger() = default;
  virtual const codec::TagScheme& scheme() const = 0;
  // One tag id per token of the query sentence.
  virtual std::vector<int> tag(const TaggingQuery& query) const = 0;
};

class NeuralTagger : public SequenceTagger {
 public:
  NeuralTagger(std::shared_ptr<const tagger::TaggerModel> model,
               std::shared_ptr<const features::Vocab> vocab, int beam_size);

  const codec::TagScheme& scheme() const override { return model_->scheme(); }
  std::vector<int> tag(const TaggingQuery& query) const override;

  tagger::Rows rows(const TaggingQuery& query) const;
  const tagger::TaggerModel& model() const { return *model_; }

 private:
  std::shared_ptr<const tagger::TaggerModel> model_;
  std::shared_ptr<const features::Vocab> vocab_;
  int beam_size_;
};

class EnsembleTagger : public SequenceTagger {
 public:
  EnsembleTagger(std::vector<std::shared_ptr<const NeuralTagger>> members, int beam_size);

  const codec::TagScheme& scheme() const override { return members_.front()->scheme(); }
  std::vector<int> tag(const TaggingQuery& query) const override;
  ensemble::EnsembleResult decode(const TaggingQuery& query) const;

 private:
  std::vector<std::shared_ptr<const NeuralTagger>> members_;
  ensemble::EnsembleConfig config_;
};

// Step 1 tags precipitants (BIOHD), step 2 tags the typed trigger of one
// precipitant (BIOHD_DDI, where a PD trigger is the specific interaction),
// step 3 tags the real PD trigger (BIOHD).
struct PipelineModels {
  std::shared_ptr<const SequenceTagger> step1;
  std::shared_ptr<const SequenceTagger> step2;
  std::shared_ptr<const SequenceTagger> step3;

  // Throws Error when a step is missing or has the wrong scheme.
  void check() const;
};

struct PipelineOptions {
  // When step 3 finds nothing, reuse the specific interaction as the PD
  // trigger; otherwise the interaction is dropped.
  bool pd_fallback_to_specific_interaction = true;
};

struct StepTrace {
  int sentence = 0;
  int step = 0;
  std::vector<Span> anchors;
  std::vector<std::string> tags;
};

struct ExtractionResult {
  std::vector<corpus::Mention> mentions;
  std::vector<corpus::Interaction> interactions;
};

// Step-1 spans with label drug names removed.
std::vector<Span> extract_precipitants(const PipelineModels& models, const corpus::Document& doc,
                                       int sentence_index,
                                       std::vector<StepTrace>* trace = nullptr);

std::vector<codec::TaggedSpan> extract_typed_triggers(const PipelineModels& models,
                                                      const corpus::Document& doc,
                                                      int sentence_index, const Span& precipitant,
                                                      std::vector<StepTrace>* trace = nullptr);

struct PdResolution {
  std::optional<Span> trigger;
  Span specific_interaction;
};

// Several step-3 spans: the one closest to the specific interaction wins,
// leftmost on ties.
PdResolution resolve_pd(const PipelineModels& models, const corpus::Document& doc,
                        int sentence_index, const Span& precipitant, const Span& pd_span,
                        std::vector<StepTrace>* trace = nullptr);

// Mentions are merged on (kind, sentence, span, type) and numbered m1, m2, ...
// in order of first appearance.
ExtractionResult run_pipeline(const PipelineModels& models, const corpus::Document& doc,
                              const pksubtype::Dictionaries& dicts,
                              const PipelineOptions& options = {},
                              std::vector<StepTrace>* trace = nullptr);

// The input document with its annotations replaced by the extraction.
corpus::Document with_predictions(const corpus::Document& doc, const ExtractionResult& result);

// Gold targets per step, shared by training and by oracle taggers.
std::vector<Span> label_occurrences(const corpus::Document& doc, int sentence_index);
std::vector<codec::TaggedSpan> step1_targets(const corpus::Document& doc, int sentence_index);
std::vector<codec::TaggedSpan> step2_targets(const corpus::Document& doc, int sentence_index,
                                             const Span& precipitant);
std::vector<codec::TaggedSpan> step3_targets(const corpus::Document& doc, int sentence_index,
                                             const Span& precipitant, const Span& pd_span);

// Anchors used for each step's position features.
std::vector<Span> step1_anchors(const corpus::Document& doc, int sentence_index);
std::vector<Span> step2_anchors(const Span& precipitant);
std::vector<Span> step3_anchors(const Span& precipitant, const Span& pd_span);

struct TrainingSets {
  std::vector<tagger::TaggingExample> step1, step2, step3;
  std::vector<std::string> skipped;  // one note per unrepresentable gold set
};

TrainingSets build_training_sets(const std::vector<corpus::Document>& docs,
                                 const features::Vocab& vocab);

struct PipelineTrainConfig {
  tagger::TaggerConfig step1, step2, step3;
  bool parallel = true;  // train the three steps on separate threads
  std::optional<features::Vocab> vocab;  // fitted on the training documents when absent
};

struct TrainedPipeline {
  features::Vocab vocab;
  tagger::TaggerModel step1, step2, step3;
  tagger::TrainHistory history1, history2, history3;
  std::string report;
};

// Fits the vocabulary (unless one is given), derives targets and trains
// each step. Throws Error when there is nothing to train on.
TrainedPipeline train_pipeline(const std::vector<corpus::Document>& train_docs,
                               const std::vector<corpus::Document>& val_docs,
                               const PipelineTrainConfig& config);

}  // namespace ddix::pipeline
