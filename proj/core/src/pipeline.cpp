#include "ddix/pipeline.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <tuple>

namespace ddix::pipeline {

NeuralTagger::NeuralTagger(std::shared_ptr<const tagger::TaggerModel> model,
                           std::shared_ptr<const features::Vocab> vocab, int beam_size)
    : model_(std::move(model)), vocab_(std::move(vocab)), beam_size_(beam_size) {
  if (!model_ || !vocab_) throw Error("neural tagger needs a model and a vocabulary");
  if (beam_size_ < 1) throw Error("beam size must be at least 1");
}

tagger::Rows NeuralTagger::rows(const TaggingQuery& query) const {
  return features::build_rows(*query.sentence, query.anchors, *vocab_);
}

std::vector<int> NeuralTagger::tag(const TaggingQuery& query) const {
  if (query.sentence->tokens.empty()) return {};
  return tagger::beam_decode(*model_, rows(query), beam_size_).tags;
}

EnsembleTagger::EnsembleTagger(std::vector<std::shared_ptr<const NeuralTagger>> members,
                               int beam_size)
    : members_(std::move(members)), config_{beam_size, tagger::LabelSet::Alphabet} {
  if (members_.empty()) throw Error("ensemble tagger needs at least one member");
  for (const auto& m : members_) {
    if (!m) throw Error("ensemble tagger: null member");
    if (!(m->scheme() == members_.front()->scheme())) {
      throw Error("ensemble tagger: members use different tag schemes");
    }
  }
}

ensemble::EnsembleResult EnsembleTagger::decode(const TaggingQuery& query) const {
  std::vector<const tagger::TaggerModel*> models;
  std::vector<tagger::Rows> rows;
  for (const auto& m : members_) {
    models.push_back(&m->model());
    rows.push_back(m->rows(query));
  }
  return ensemble::ensemble_decode(models, rows, config_);
}

std::vector<int> EnsembleTagger::tag(const TaggingQuery& query) const {
  if (query.sentence->tokens.empty()) return {};
  return decode(query).sequence;
}

void PipelineModels::check() const {
  auto expect = [](const std::shared_ptr<const SequenceTagger>& t, codec::Variant v, int step) {
    if (!t) throw Error("pipeline: step " + std::to_string(step) + " tagger missing");
    if (t->scheme().variant() != v) {
      throw Error("pipeline: step " + std::to_string(step) + " tagger uses " +
                  std::string(codec::to_string(t->scheme().variant())) + ", expected " +
                  std::string(codec::to_string(v)));
    }
  };
  expect(step1, codec::Variant::BIOHD, 1);
  expect(step2, codec::Variant::BIOHD_DDI, 2);
  expect(step3, codec::Variant::BIOHD, 3);
}

std::vector<Span> label_occurrences(const corpus::Document& doc, int sentence_index) {
  return corpus::find_occurrences(doc.sentences.at(sentence_index), doc.label_drug_names());
}

std::vector<Span> step1_anchors(const corpus::Document& doc, int sentence_index) {
  return label_occurrences(doc, sentence_index);
}

std::vector<Span> step2_anchors(const Span& precipitant) { return {precipitant}; }

std::vector<Span> step3_anchors(const Span& precipitant, const Span& pd_span) {
  return {precipitant, pd_span};
}

namespace {

std::vector<codec::TaggedSpan> run_step(const SequenceTagger& tagger, const corpus::Document& doc,
                                        int sentence_index, std::vector<Span> anchors, int step,
                                        std::vector<StepTrace>* trace) {
  const auto& sentence = doc.sentences.at(sentence_index);
  if (sentence.tokens.empty()) return {};
  TaggingQuery q{&doc, sentence_index, &sentence, std::move(anchors)};
  auto ids = tagger.tag(q);
  if (static_cast<int>(ids.size()) != sentence.size()) {
    throw Error("step " + std::to_string(step) + " tagger returned " +
                std::to_string(ids.size()) + " tags for " + std::to_string(sentence.size()) +
                " tokens");
  }
  if (trace) {
    trace->push_back({sentence_index, step, q.anchors, tagger.scheme().to_tags(ids)});
  }
  return codec::decode_ids(ids, tagger.scheme());
}

const corpus::Mention& mention_of(const corpus::Document& doc, const std::string& id) {
  const auto* m = doc.find_mention(id);
  if (!m) throw ValidationError(doc.id + ": dangling mention id " + id);
  return *m;
}

}  // namespace

std::vector<Span> extract_precipitants(const PipelineModels& models, const corpus::Document& doc,
                                       int sentence_index, std::vector<StepTrace>* trace) {
  const auto names = doc.label_drug_names();
  const auto& sentence = doc.sentences.at(sentence_index);
  std::vector<Span> out;
  for (auto& m : run_step(*models.step1, doc, sentence_index, step1_anchors(doc, sentence_index),
                          1, trace)) {
    if (!corpus::matches_any_name(sentence, m.span, names)) out.push_back(std::move(m.span));
  }
  return out;
}

std::vector<codec::TaggedSpan> extract_typed_triggers(const PipelineModels& models,
                                                      const corpus::Document& doc,
                                                      int sentence_index, const Span& precipitant,
                                                      std::vector<StepTrace>* trace) {
  return run_step(*models.step2, doc, sentence_index, step2_anchors(precipitant), 2, trace);
}

PdResolution resolve_pd(const PipelineModels& models, const corpus::Document& doc,
                        int sentence_index, const Span& precipitant, const Span& pd_span,
                        std::vector<StepTrace>* trace) {
  PdResolution r{std::nullopt, pd_span};
  int best = std::numeric_limits<int>::max();
  // decode output is sorted, so the first of equally close spans is leftmost
  for (auto& m : run_step(*models.step3, doc, sentence_index,
                          step3_anchors(precipitant, pd_span), 3, trace)) {
    const int d = token_gap(m.span, pd_span);
    if (d < best) {
      best = d;
      r.trigger = m.span;
    }
  }
  return r;
}

namespace {

class ResultBuilder {
 public:
  std::string mention(MentionKind kind, int sentence, const Span& span,
                      std::optional<DdiType> ddi) {
    auto key = std::make_tuple(kind, sentence, span, ddi);
    auto it = ids_.find(key);
    if (it != ids_.end()) return it->second;
    std::string id = "m" + std::to_string(result.mentions.size() + 1);
    result.mentions.push_back({id, kind, sentence, span, ddi});
    ids_.emplace(key, id);
    return id;
  }

  void interaction(corpus::Interaction in) {
    if (std::find(result.interactions.begin(), result.interactions.end(), in) ==
        result.interactions.end()) {
      result.interactions.push_back(std::move(in));
    }
  }

  ExtractionResult result;

 private:
  std::map<std::tuple<MentionKind, int, Span, std::optional<DdiType>>, std::string> ids_;
};

}  // namespace

ExtractionResult run_pipeline(const PipelineModels& models, const corpus::Document& doc,
                              const pksubtype::Dictionaries& dicts,
                              const PipelineOptions& options, std::vector<StepTrace>* trace) {
  models.check();
  ResultBuilder out;
  for (int s = 0; s < static_cast<int>(doc.sentences.size()); ++s) {
    const auto& sentence = doc.sentences[s];
    const auto labels = label_occurrences(doc, s);
    for (const auto& p : extract_precipitants(models, doc, s, trace)) {
      std::vector<corpus::Interaction> found;
      for (const auto& t : extract_typed_triggers(models, doc, s, p, trace)) {
        if (!t.ddi) continue;
        switch (*t.ddi) {
          case DdiType::UN:
          case DdiType::PK: {
            corpus::Interaction in;
            in.type = *t.ddi;
            in.trigger = out.mention(MentionKind::Trigger, s, t.span, t.ddi);
            if (in.type == DdiType::PK) {
              in.pk_subtype = pksubtype::classify(sentence, t.span, p, labels, dicts).subtype;
            }
            found.push_back(std::move(in));
            break;
          }
          case DdiType::PD: {
            auto pd = resolve_pd(models, doc, s, p, t.span, trace);
            if (!pd.trigger) {
              if (!options.pd_fallback_to_specific_interaction) break;
              pd.trigger = pd.specific_interaction;
            }
            corpus::Interaction in;
            in.type = DdiType::PD;
            in.trigger = out.mention(MentionKind::Trigger, s, *pd.trigger, DdiType::PD);
            in.specific_interaction =
                out.mention(MentionKind::SpecificInteraction, s, pd.specific_interaction,
                            std::nullopt);
            found.push_back(std::move(in));
            break;
          }
        }
      }
      if (found.empty()) continue;  // no trigger: the precipitant is dropped
      const std::string pid = out.mention(MentionKind::Precipitant, s, p, std::nullopt);
      for (auto& in : found) {
        in.precipitant = pid;
        out.interaction(std::move(in));
      }
    }
  }
  return std::move(out.result);
}

corpus::Document with_predictions(const corpus::Document& doc, const ExtractionResult& result) {
  corpus::Document out = doc;
  out.mentions = result.mentions;
  out.interactions = result.interactions;
  return out;
}

std::vector<codec::TaggedSpan> step1_targets(const corpus::Document& doc, int sentence_index) {
  std::vector<codec::TaggedSpan> out;
  for (const auto& m : doc.mentions) {
    if (m.kind == MentionKind::Precipitant && m.sentence == sentence_index) {
      out.push_back({m.span, std::nullopt});
    }
  }
  return out;
}

std::vector<codec::TaggedSpan> step2_targets(const corpus::Document& doc, int sentence_index,
                                             const Span& precipitant) {
  std::vector<codec::TaggedSpan> out;
  for (const auto& in : doc.interactions) {
    const auto& p = mention_of(doc, in.precipitant);
    if (p.sentence != sentence_index || p.span != precipitant) continue;
    const std::string& target =
        in.type == DdiType::PD ? in.specific_interaction.value() : in.trigger;
    out.push_back({mention_of(doc, target).span, in.type});
  }
  return out;
}

std::vector<codec::TaggedSpan> step3_targets(const corpus::Document& doc, int sentence_index,
                                             const Span& precipitant, const Span& pd_span) {
  std::vector<codec::TaggedSpan> out;
  for (const auto& in : doc.interactions) {
    if (in.type != DdiType::PD) continue;
    const auto& p = mention_of(doc, in.precipitant);
    if (p.sentence != sentence_index || p.span != precipitant) continue;
    if (mention_of(doc, in.specific_interaction.value()).span != pd_span) continue;
    out.push_back({mention_of(doc, in.trigger).span, std::nullopt});
  }
  return out;
}

}  // namespace ddix::pipeline
