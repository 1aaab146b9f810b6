#include <cstdio>
#include <future>
#include <set>

#include "ddix/pipeline.hpp"

namespace ddix::pipeline {

namespace {

void add_example(std::vector<tagger::TaggingExample>& out, std::vector<std::string>& skipped,
                 const corpus::Document& doc, int s, const std::vector<Span>& anchors,
                 std::vector<codec::TaggedSpan> targets, codec::Variant variant,
                 const features::Vocab& vocab, const char* step) {
  const auto& sentence = doc.sentences[s];
  if (sentence.tokens.empty()) return;
  const codec::TagScheme scheme(variant);
  std::vector<codec::TaggedSpan> dropped;
  auto tags = codec::encode_lenient(sentence.size(), std::move(targets), scheme, &dropped);
  for (const auto& d : dropped) {
    skipped.push_back(doc.id + " sentence " + std::to_string(s) + " " + step +
                      ": unrepresentable mention " + d.span.to_string());
  }
  out.push_back({features::build_rows(sentence, anchors, vocab), scheme.to_ids(tags)});
}

std::string format_history(const char* step, const tagger::TrainHistory& h) {
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s epochs=%d best_epoch=%d best_val_f1=%.6f early_stopped=%s\n",
                step, h.epochs_run(), h.best_epoch, h.best_val_f1,
                h.early_stopped ? "yes" : "no");
  out += buf;
  for (const auto& e : h.epochs) {
    std::snprintf(buf, sizeof buf, "%s epoch=%d loss=%.6f val_f1=%.6f\n", step, e.epoch,
                  e.train_loss, e.val_f1);
    out += buf;
  }
  return out;
}

}  // namespace

TrainingSets build_training_sets(const std::vector<corpus::Document>& docs,
                                 const features::Vocab& vocab) {
  TrainingSets sets;
  for (const auto& doc : docs) {
    for (int s = 0; s < static_cast<int>(doc.sentences.size()); ++s) {
      add_example(sets.step1, sets.skipped, doc, s, step1_anchors(doc, s), step1_targets(doc, s),
                  codec::Variant::BIOHD, vocab, "step1");

      std::set<Span> precipitants;
      for (const auto& p : step1_targets(doc, s)) precipitants.insert(p.span);
      for (const auto& p : precipitants) {
        auto targets = step2_targets(doc, s, p);
        add_example(sets.step2, sets.skipped, doc, s, step2_anchors(p), targets,
                    codec::Variant::BIOHD_DDI, vocab, "step2");
        std::set<Span> pd_spans;
        for (const auto& t : targets) {
          if (t.ddi == DdiType::PD) pd_spans.insert(t.span);
        }
        for (const auto& si : pd_spans) {
          add_example(sets.step3, sets.skipped, doc, s, step3_anchors(p, si),
                      step3_targets(doc, s, p, si), codec::Variant::BIOHD, vocab, "step3");
        }
      }
    }
  }
  return sets;
}

TrainedPipeline train_pipeline(const std::vector<corpus::Document>& train_docs,
                               const std::vector<corpus::Document>& val_docs,
                               const PipelineTrainConfig& config) {
  if (train_docs.empty()) throw Error("train: empty training corpus");
  features::Vocab vocab;
  if (config.vocab) {
    vocab = *config.vocab;
  } else {
    for (const auto& d : train_docs) vocab.fit(d.sentences);
  }

  const TrainingSets train = build_training_sets(train_docs, vocab);
  const TrainingSets val = build_training_sets(val_docs, vocab);
  const std::pair<const char*, const std::vector<tagger::TaggingExample>*> steps[] = {
      {"step1", &train.step1}, {"step2", &train.step2}, {"step3", &train.step3}};
  for (const auto& [name, set] : steps) {
    if (set->empty()) throw Error(std::string("train: no training examples for ") + name);
  }

  auto run = [&](const tagger::TaggerConfig& c, codec::Variant v,
                 const std::vector<tagger::TaggingExample>& tr,
                 const std::vector<tagger::TaggingExample>& va) {
    return tagger::train(tagger::TaggerModel(c, v, vocab.word_count(), vocab.char_count()), tr,
                         va);
  };
  const auto policy = config.parallel ? std::launch::async : std::launch::deferred;
  auto f1 = std::async(policy, run, config.step1, codec::Variant::BIOHD, std::cref(train.step1),
                       std::cref(val.step1));
  auto f2 = std::async(policy, run, config.step2, codec::Variant::BIOHD_DDI,
                       std::cref(train.step2), std::cref(val.step2));
  auto f3 = std::async(policy, run, config.step3, codec::Variant::BIOHD, std::cref(train.step3),
                       std::cref(val.step3));
  auto r1 = f1.get();
  auto r2 = f2.get();
  auto r3 = f3.get();

  std::string report = "# ddix training report\n";
  report += "vocabulary words=" + std::to_string(vocab.word_count()) +
            " chars=" + std::to_string(vocab.char_count()) + "\n";
  report += "documents train=" + std::to_string(train_docs.size()) +
            " validation=" + std::to_string(val_docs.size()) + "\n";
  const std::pair<const char*, const TrainingSets*> sizes[] = {{"train", &train},
                                                               {"validation", &val}};
  for (const auto& [label, sets] : sizes) {
    report += std::string("examples ") + label + " step1=" + std::to_string(sets->step1.size()) +
              " step2=" + std::to_string(sets->step2.size()) +
              " step3=" + std::to_string(sets->step3.size()) + "\n";
  }
  report += format_history("step1", r1.history);
  report += format_history("step2", r2.history);
  report += format_history("step3", r3.history);
  for (const auto& s : train.skipped) report += "skipped " + s + "\n";

  return {std::move(vocab),      std::move(r1.model), std::move(r2.model), std::move(r3.model),
          std::move(r1.history), std::move(r2.history), std::move(r3.history),
          std::move(report)};
}

}  // namespace ddix::pipeline
