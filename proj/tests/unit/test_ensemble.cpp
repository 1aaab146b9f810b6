#include <gtest/gtest.h>

#include <map>
#include <random>

#include "ddix/ensemble.hpp"
#include "tiny_model.hpp"

using namespace ddix;
using namespace ddix::tagger;
using ddix::ensemble::EnsembleConfig;
using ddix::ensemble::ensemble_decode;

namespace {

constexpr int kWords = 10;
constexpr int kChars = 6;

TaggerModel small(std::uint64_t seed, std::mt19937_64& rng, int outputs = 4) {
  auto c = ddix::testing::tiny_config(seed);
  c.decoder_output_size = outputs;
  TaggerModel m(c, codec::Variant::BIO, kWords, kChars);
  ddix::testing::scramble(m, rng, 1.2);
  return m;
}

EnsembleConfig all_outputs(int beam) { return {beam, LabelSet::AllOutputs}; }

}  // namespace

TEST(Ensemble, IdenticalModelsReduceToOne) {
  std::mt19937_64 rng(1);
  auto m = small(1, rng);
  auto rows = ddix::testing::random_rows(rng, 4, kWords, kChars, 6);
  auto r = ensemble_decode({&m, &m, &m}, rows, all_outputs(8));
  ASSERT_EQ(r.proposals.size(), 1u);
  EXPECT_EQ(r.proposals[0].merged_from, (std::vector<int>{1, 2}));
  EXPECT_EQ(r.sequence, beam_decode(m, rows, 8, LabelSet::AllOutputs).tags);
  EXPECT_NEAR(r.proposals[0].total, 3 * r.proposals[0].per_model_scores[0], 1e-12);
}

TEST(Ensemble, SingleModelIsBeamDecode) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    auto m = small(trial + 1, rng);
    auto rows = ddix::testing::random_rows(rng, 5, kWords, kChars, 6);
    auto r = ensemble_decode({&m}, rows, all_outputs(3));
    auto b = beam_decode(m, rows, 3, LabelSet::AllOutputs);
    EXPECT_EQ(r.sequence, b.tags);
    EXPECT_NEAR(r.proposals[0].total, b.score, 1e-9);
  }
}

TEST(Ensemble, MatchesExhaustiveRescoring) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<TaggerModel> ms;
    for (int j = 0; j < 3; ++j) ms.push_back(small(10 * trial + j + 1, rng));
    auto rows = ddix::testing::random_rows(rng, 3, kWords, kChars, 6);
    auto r = ensemble_decode({&ms[0], &ms[1], &ms[2]}, rows, all_outputs(8));

    // Score all 64 sequences under every model, then argmax over the proposals.
    std::map<std::vector<int>, double> total;
    std::vector<int> seq(3, 0);
    for (int code = 0; code < 64; ++code) {
      seq = {code / 16, (code / 4) % 4, code % 4};
      for (const auto& m : ms) total[seq] += ddix::testing::forced_score(m, rows, seq);
    }
    std::vector<int> best;
    double best_total = -1e300;
    for (int i = 0; i < 3; ++i) {
      const auto prop = beam_decode(ms[i], rows, 8, LabelSet::AllOutputs);
      if (total[prop.tags] > best_total) {
        best_total = total[prop.tags];
        best = prop.tags;
      }
    }
    EXPECT_EQ(r.sequence, best);
    EXPECT_NEAR(r.proposals[r.winner].total, best_total, 1e-9);
    for (const auto& p : r.proposals) {
      EXPECT_LE(p.total, r.proposals[r.winner].total);
      double sum = 0;
      for (double s : p.per_model_scores) sum += s;
      EXPECT_EQ(p.total, sum);
    }
  }
}

TEST(Ensemble, SelfScoresEqualBeamScores) {
  std::mt19937_64 rng(4);
  std::vector<TaggerModel> ms;
  for (int j = 0; j < 3; ++j) ms.push_back(small(j + 40, rng));
  auto rows = ddix::testing::random_rows(rng, 5, kWords, kChars, 6);
  auto r = ensemble_decode({&ms[0], &ms[1], &ms[2]}, rows, all_outputs(8));
  for (const auto& p : r.proposals) {
    const double own = beam_decode(ms[p.source_model], rows, 8, LabelSet::AllOutputs).score;
    EXPECT_NEAR(p.per_model_scores[p.source_model], own, 1e-9);
    for (int j : p.merged_from) {
      EXPECT_NEAR(p.per_model_scores[j], beam_decode(ms[j], rows, 8, LabelSet::AllOutputs).score,
                  1e-9);
    }
  }
}

TEST(Ensemble, PermutationKeepsWinnerWhenTotalsDiffer) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<TaggerModel> ms;
    for (int j = 0; j < 3; ++j) ms.push_back(small(7 * trial + j + 1, rng));
    auto rows = ddix::testing::random_rows(rng, 4, kWords, kChars, 6);
    auto a = ensemble_decode({&ms[0], &ms[1], &ms[2]}, rows, all_outputs(4));
    auto b = ensemble_decode({&ms[2], &ms[0], &ms[1]}, rows, all_outputs(4));
    EXPECT_EQ(a.sequence, b.sequence);
  }
}

TEST(Ensemble, ExactTiesGoToLowestModel) {
  std::mt19937_64 rng(6);
  // Two bias-only models preferring different labels by a margin so wide
  // that every log-probability is exactly 0 or -50.
  auto a = small(1, rng), b = small(2, rng);
  for (auto* m : {&a, &b}) {
    m->params().out_w.setZero();
    m->params().out_b.setZero();
  }
  a.params().out_b(1, 0) = 50.0;
  b.params().out_b(2, 0) = 50.0;
  auto rows = ddix::testing::random_rows(rng, 3, kWords, kChars, 6);
  // Label 1 under a and label 2 under b are symmetric: equal totals.
  auto r = ensemble_decode({&a, &b}, rows, all_outputs(4));
  ASSERT_EQ(r.proposals.size(), 2u);
  EXPECT_EQ(r.proposals[0].total, r.proposals[1].total);
  EXPECT_EQ(r.winner, 0);
  EXPECT_EQ(r.sequence, (std::vector<int>{1, 1, 1}));
  auto swapped = ensemble_decode({&b, &a}, rows, all_outputs(4));
  EXPECT_EQ(swapped.sequence, (std::vector<int>{2, 2, 2}));
}

TEST(Ensemble, Errors) {
  std::mt19937_64 rng(7);
  auto a = small(1, rng, 4), b = small(2, rng, 5);
  auto rows = ddix::testing::random_rows(rng, 3, kWords, kChars, 6);
  EXPECT_THROW(ensemble_decode({&a, &b}, rows), Error);
  TaggerModel fine(ddix::testing::tiny_config(), codec::Variant::BIOHD, kWords, kChars);
  EXPECT_THROW(ensemble_decode({&a, &fine}, rows), Error);
  EXPECT_THROW(ensemble_decode({}, rows), Error);
  EXPECT_THROW(ensemble_decode({&a}, rows, {0, LabelSet::Alphabet}), Error);
}
