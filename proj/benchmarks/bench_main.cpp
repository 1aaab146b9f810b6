#include <benchmark/benchmark.h>

#include <random>

#include "ddix/codec.hpp"
#include "ddix/corpus.hpp"
#include "ddix/ensemble.hpp"
#include "ddix/features.hpp"
#include "ddix/pipeline.hpp"
#include "ddix/tagger.hpp"

namespace {

using namespace ddix;

// Step-2 targets from a synthetic corpus: realistic mixes of shared and
// discontinuous typed mentions.
struct Fixture {
  std::vector<corpus::Document> docs = corpus::synth_corpus(17, 60);
  features::Vocab vocab;
  pipeline::TrainingSets sets;

  Fixture() {
    std::vector<corpus::Sentence> sentences;
    for (const auto& d : docs) {
      sentences.insert(sentences.end(), d.sentences.begin(), d.sentences.end());
    }
    vocab.fit(sentences);
    sets = pipeline::build_training_sets(docs, vocab);
  }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

tagger::TaggerConfig bench_config() {
  tagger::TaggerConfig c;
  c.word_dim = 32;
  c.encoder_output_size = 64;
  c.gru_hidden = 32;
  c.conv_layers = 2;
  c.dropout_rate = 0.0;
  return c;
}

void BM_CodecRoundTrip(benchmark::State& state) {
  const codec::TagScheme scheme(codec::Variant::BIOHD_DDI);
  const auto& f = fixture();
  std::vector<std::pair<int, std::vector<codec::TaggedSpan>>> cases;
  for (const auto& d : f.docs) {
    for (int s = 0; s < static_cast<int>(d.sentences.size()); ++s) {
      for (const auto& m : d.mentions) {
        if (m.sentence != s || m.kind != MentionKind::Precipitant) continue;
        auto targets = pipeline::step2_targets(d, s, m.span);
        if (!targets.empty()) cases.emplace_back(d.sentences[s].size(), std::move(targets));
      }
    }
  }
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& [n, mentions] = cases[i++ % cases.size()];
    try {
      auto tags = codec::encode(n, mentions, scheme);
      benchmark::DoNotOptimize(codec::decode(tags, scheme));
    } catch (const codec::UnrepresentableError&) {
    }
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()));
}
BENCHMARK(BM_CodecRoundTrip);

void BM_BeamDecode(benchmark::State& state) {
  const auto& f = fixture();
  auto cfg = bench_config();
  const tagger::TaggerModel model(cfg, codec::Variant::BIOHD_DDI, f.vocab.word_count(),
                                  f.vocab.char_count());
  const auto& ex = f.sets.step2.front();
  const int beam = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(tagger::beam_decode(model, ex.rows, beam));
  state.counters["tokens"] = static_cast<double>(ex.rows.size());
}
BENCHMARK(BM_BeamDecode)->Arg(1)->Arg(8)->Arg(32);

void BM_Gradient(benchmark::State& state) {
  const auto& f = fixture();
  auto cfg = bench_config();
  cfg.use_chars = state.range(0) != 0;
  const tagger::TaggerModel model(cfg, codec::Variant::BIOHD_DDI, f.vocab.word_count(),
                                  f.vocab.char_count());
  const auto& ex = f.sets.step2.front();
  for (auto _ : state) benchmark::DoNotOptimize(tagger::grad(model, ex.rows, ex.gold));
}
BENCHMARK(BM_Gradient)->Arg(0)->Arg(1);

void BM_Ensemble(benchmark::State& state) {
  const auto& f = fixture();
  std::vector<tagger::TaggerModel> members;
  for (int k = 0; k < state.range(0); ++k) {
    auto cfg = bench_config();
    cfg.rng_seed = 100 + k;
    members.emplace_back(cfg, codec::Variant::BIOHD_DDI, f.vocab.word_count(),
                         f.vocab.char_count());
  }
  std::vector<const tagger::TaggerModel*> ptrs;
  for (const auto& m : members) ptrs.push_back(&m);
  const auto& ex = f.sets.step2.front();
  for (auto _ : state) benchmark::DoNotOptimize(ensemble::ensemble_decode(ptrs, ex.rows));
}
BENCHMARK(BM_Ensemble)->Arg(2)->Arg(5);

}  // namespace
BENCHMARK_MAIN();
