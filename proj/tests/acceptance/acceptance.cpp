// Runs the ten acceptance criteria and prints one PASS/FAIL line for each.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "cli.hpp"
#include "ddix/codec.hpp"
#include "ddix/ensemble.hpp"
#include "ddix/eval.hpp"
#include "ddix/io.hpp"
#include "ddix/pipeline.hpp"
#include "ddix/pksubtype.hpp"
#include "mention_gen.hpp"
#include "oracle_tagger.hpp"
#include "tiny_model.hpp"

namespace fs = std::filesystem;
using namespace ddix;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c, d);
  return buf;
}

Outcome codec_round_trip() {
  const auto start = Clock::now();
  std::mt19937_64 rng(2024);
  long failures = 0, shared = 0, gapped = 0, total = 0;
  for (auto variant : {codec::Variant::BIOHD, codec::Variant::BIOHD_DDI}) {
    const codec::TagScheme scheme(variant);
    for (int i = 0; i < 10000; ++i) {
      auto c = testing::random_mention_case(rng, 10, 3, variant);
      ++total;
      std::set<int> seen;
      bool has_shared = false, has_gap = false;
      for (const auto& m : c.mentions) {
        has_gap |= !m.span.is_contiguous();
        for (int t : m.span.tokens()) has_shared |= !seen.insert(t).second;
      }
      shared += has_shared;
      gapped += has_gap;
      try {
        if (codec::decode(codec::encode(c.token_count, c.mentions, scheme), scheme) != c.mentions) {
          ++failures;
        }
      } catch (const Error&) {
        ++failures;
      }
    }
  }
  const double secs = seconds_since(start);
  Outcome o;
  o.pass = failures == 0 && shared > 0 && gapped > 0 && secs < 10.0;
  o.detail = std::to_string(total) + " sets (" + std::to_string(shared) + " shared-word, " +
             std::to_string(gapped) + " discontinuous), " + std::to_string(failures) +
             " failures, " + fmt("%.2f s", secs);
  return o;
}

Outcome shared_head_pair() {
  const codec::TagScheme scheme(codec::Variant::BIOHD);
  const auto sentence = corpus::Sentence::from_text("increase the blood pressure and heart rate");
  // in decode order: spans sort by their ranges, so 0-0,5-6 precedes 0-3
  std::vector<codec::TaggedSpan> mentions{{Span::from_tokens({0, 5, 6}), std::nullopt},
                                          {Span::from_tokens({0, 1, 2, 3}), std::nullopt}};
  const auto tags = codec::encode(sentence.size(), mentions, scheme);
  std::string joined;
  for (const auto& t : tags) joined += (joined.empty() ? "" : " ") + t;
  const std::string want = "D-B H-B H-I H-I O H-B H-I";
  const auto back = codec::decode(testing::tags_of(want), scheme);
  std::vector<std::string> texts;
  for (const auto& m : back) texts.push_back(sentence.span_text(m.span));
  Outcome o;
  o.pass = joined == want && back == mentions &&
           texts == std::vector<std::string>{"increase heart rate", "increase the blood pressure"};
  o.detail = "encode -> [" + joined + "], decode -> " + std::to_string(back.size()) + " mentions";
  return o;
}

Outcome gradient_check() {
  const auto start = Clock::now();
  std::mt19937_64 rng(31);
  double worst = 0.0;
  std::string worst_block;
  for (bool chars : {false, true}) {
    auto cfg = testing::tiny_config(3);
    cfg.use_chars = chars;
    tagger::TaggerModel model(cfg, codec::Variant::BIOHD, 8, 6);
    testing::scramble(model, rng, 0.8);
    auto rows = testing::random_rows(rng, 5, 8, 6, cfg.position_buckets);
    std::vector<int> gold;
    for (int t = 0; t < 5; ++t) gold.push_back(static_cast<int>(rng() % 7));
    for (const auto& c : testing::gradient_check(model, rows, gold, 1e-4)) {
      if (c.norm_rel > worst) {
        worst = c.norm_rel;
        worst_block = c.name;
      }
    }
  }
  const double secs = seconds_since(start);
  Outcome o;
  o.pass = worst <= 1e-4 && secs < 60.0;
  o.detail = fmt("max relative error %.2e", worst) + " (" + worst_block + "), " +
             fmt("%.2f s", secs);
  return o;
}

Outcome beam_vs_exhaustive() {
  const auto start = Clock::now();
  std::mt19937_64 rng(41);
  int agree = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    auto cfg = testing::tiny_config(trial + 1);
    cfg.decoder_output_size = 5;
    tagger::TaggerModel model(cfg, codec::Variant::BIO, 10, 6);
    testing::scramble(model, rng, 1.0);
    auto rows = testing::random_rows(rng, 4, 10, 6, cfg.position_buckets);
    const auto brute = testing::exhaustive_best(model, rows, 5);
    const auto beam = tagger::beam_decode(model, rows, 625, tagger::LabelSet::AllOutputs);
    const double diff = std::abs(beam.score - brute.best_score);
    worst = std::max(worst, diff);
    if (brute.sequences == 625 && beam.tags == brute.best && diff <= 1e-9) ++agree;
  }
  const double secs = seconds_since(start);
  Outcome o;
  o.pass = agree == 100 && secs < 60.0;
  o.detail = std::to_string(agree) + "/100 exact, " + fmt("max score gap %.1e, %.2f s", worst, secs);
  return o;
}

// Micro F1 over decoded mentions, counted here rather than by the library.
double independent_f1(const tagger::TaggerModel& model,
                      const std::vector<tagger::TaggingExample>& examples) {
  long tp = 0, gold = 0, pred = 0;
  for (const auto& ex : examples) {
    const auto g = codec::decode_ids(ex.gold, model.scheme());
    const auto p = codec::decode_ids(tagger::beam_decode(model, ex.rows, 8).tags, model.scheme());
    std::multiset<codec::TaggedSpan> left(g.begin(), g.end());
    for (const auto& m : p) {
      auto it = left.find(m);
      if (it != left.end()) {
        ++tp;
        left.erase(it);
      }
    }
    gold += static_cast<long>(g.size());
    pred += static_cast<long>(p.size());
  }
  if (tp == 0) return 0.0;
  const double precision = static_cast<double>(tp) / pred, recall = static_cast<double>(tp) / gold;
  return 2 * precision * recall / (precision + recall);
}

Outcome overfit() {
  const auto start = Clock::now();
  std::vector<corpus::Document> docs;
  int sentences = 0;
  for (const auto& d : corpus::synth_corpus(5, 40)) {
    if (sentences >= 30) break;
    auto doc = d;
    if (sentences + static_cast<int>(doc.sentences.size()) > 30) {
      // Keep exactly 30 sentences; later sentences' annotations go with them.
      const int keep = 30 - sentences;
      doc.sentences.resize(keep);
      std::set<std::string> dropped;
      std::vector<corpus::Mention> kept;
      for (const auto& m : doc.mentions) {
        if (m.sentence < keep) kept.push_back(m);
        else dropped.insert(m.id);
      }
      doc.mentions = kept;
      std::vector<corpus::Interaction> ins;
      for (const auto& in : doc.interactions) {
        if (!dropped.count(in.precipitant)) ins.push_back(in);
      }
      doc.interactions = ins;
    }
    sentences += static_cast<int>(doc.sentences.size());
    docs.push_back(std::move(doc));
  }
  features::Vocab vocab;
  for (const auto& d : docs) vocab.fit(d.sentences);
  const auto sets = pipeline::build_training_sets(docs, vocab);

  tagger::TaggerConfig cfg;
  cfg.word_dim = 16;
  cfg.encoder_output_size = 32;
  cfg.gru_hidden = 16;
  cfg.conv_layers = 2;
  cfg.dropout_rate = 0.0;
  cfg.batch_size = 4;
  cfg.max_epochs = 200;
  cfg.early_stopping_patience = 200;
  cfg.rng_seed = 7;
  tagger::TaggerModel model(cfg, codec::Variant::BIOHD, vocab.word_count(), vocab.char_count());

  int reached = 0;
  auto result = tagger::train(model, sets.step1, sets.step1, [&](const tagger::EpochRecord& r) {
    if (r.val_f1 >= 0.95 && reached == 0) reached = r.epoch;
  });
  // The returned best parameters, scored by a count independent of the trainer.
  const double f1 = independent_f1(result.model, sets.step1);
  const double secs = seconds_since(start);
  Outcome o;
  o.pass = reached > 0 && f1 >= 0.95 && secs < 300.0;
  o.detail = std::to_string(sets.step1.size()) + " sentences, " +
             (reached ? "train F1 >= 0.95 first at epoch " + std::to_string(reached)
                      : std::string("train F1 never reached 0.95")) +
             fmt(", final best F1 %.4f over %.0f epochs, %.1f s", f1,
                 result.history.epochs_run(), secs);
  return o;
}

Outcome oracle_pipeline() {
  const auto models = testing::oracle_models();
  const auto dicts = pksubtype::Dictionaries::seed();
  const auto gold = corpus::synth_corpus(61, 100);
  std::vector<corpus::Document> pred;
  for (const auto& d : gold) {
    pred.push_back(pipeline::with_predictions(d, pipeline::run_pipeline(models, d, dicts)));
  }
  const auto s = eval::score_corpus(gold, pred);
  const double t1 = eval::f1(s.mentions_micro).f, t2 = eval::f1(s.interactions).f;
  Outcome o;
  o.pass = t1 == 1.0 && t2 == 1.0;
  o.detail = std::to_string(gold.size()) + " documents, " +
             std::to_string(s.mentions_micro.gold()) + " mentions, " +
             std::to_string(s.interactions.gold()) + " interactions, " +
             fmt("task1 F1 %.6f, task2 F1 %.6f", t1, t2);
  return o;
}

Outcome pk_vectors() {
  const auto d = pksubtype::Dictionaries::seed();
  struct Row {
    const char* phrase;
    Trend trend;
    PkParameter param;
  };
  const Row rows[] = {{"increases exposure", Trend::Increased, PkParameter::Level},
                      {"elevated plasma concentrations", Trend::Increased, PkParameter::Level},
                      {"decreases exposure", Trend::Decreased, PkParameter::Level},
                      {"lower serum levels", Trend::Decreased, PkParameter::Level},
                      {"increased Cmax", Trend::Increased, PkParameter::Cmax}};
  int table_ok = 0, absent_ok = 0;
  for (const auto& r : rows) {
    auto s = corpus::Sentence::from_text(std::string("Ketoconazole ") + r.phrase);
    const Span trigger = Span::contiguous(1, s.size() - 1), precipitant = Span::contiguous(0, 0);
    auto c = pksubtype::classify(s, trigger, precipitant, {}, d);
    table_ok += c.subtype.trend == r.trend && c.subtype.parameter == r.param &&
                !c.low_confidence();
    absent_ok += c.subtype.object == PkObject::ConcomitantDrug;
  }
  std::set<std::string> codes;
  for (const char* t : {"increases", "decreases"}) {
    for (const char* p : {"AUC", "Cmax", "half-life", "levels", "Tmax"}) {
      auto s = corpus::Sentence::from_text(std::string("digoxin ") + t + " " + p +
                                           " with ketoconazole");
      const Span trigger = Span::contiguous(1, 2), precipitant = Span::contiguous(4, 4);
      codes.insert(pksubtype::classify(s, trigger, precipitant, {Span::contiguous(0, 0)}, d)
                       .subtype.code());
      codes.insert(pksubtype::classify(s, trigger, precipitant, {}, d).subtype.code());
    }
  }
  Outcome o;
  o.pass = table_ok == 5 && absent_ok == 5 && codes.size() == 20;
  o.detail = std::to_string(table_ok) + "/5 keyword rows, " + std::to_string(absent_ok) +
             "/5 absent-label fixtures, " + std::to_string(codes.size()) + "/20 codes reached";
  return o;
}

Outcome ensemble_oracle() {
  std::mt19937_64 rng(81);
  int agree = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<tagger::TaggerModel> ms;
    for (int j = 0; j < 3; ++j) {
      auto cfg = testing::tiny_config(3 * trial + j + 1);
      cfg.decoder_output_size = 4;
      ms.emplace_back(cfg, codec::Variant::BIO, 10, 6);
      testing::scramble(ms.back(), rng, 1.2);
    }
    auto rows = testing::random_rows(rng, 3, 10, 6, 6);
    auto r = ensemble::ensemble_decode({&ms[0], &ms[1], &ms[2]}, rows,
                                       {8, tagger::LabelSet::AllOutputs});
    // Exhaustive table of summed scores over all 64 sequences.
    std::map<std::vector<int>, double> total;
    for (int code = 0; code < 64; ++code) {
      std::vector<int> seq{code / 16, (code / 4) % 4, code % 4};
      for (const auto& m : ms) total[seq] += testing::forced_score(m, rows, seq);
    }
    std::vector<int> best;
    double best_total = -1e300;
    for (const auto& m : ms) {
      const auto prop = tagger::beam_decode(m, rows, 8, tagger::LabelSet::AllOutputs).tags;
      if (total.at(prop) > best_total) {
        best_total = total.at(prop);
        best = prop;
      }
    }
    agree += r.sequence == best && std::abs(r.proposals[r.winner].total - best_total) <= 1e-9;
  }
  Outcome o;
  o.pass = agree == 100;
  o.detail = std::to_string(agree) + "/100 trials agree";
  return o;
}

Outcome adadelta_sanity() {
  // f(w) = 0.5 * (w - 3)^2 on one parameter; every other gradient is zero.
  auto cfg = testing::tiny_config(1);
  tagger::TaggerModel model(cfg, codec::Variant::BIO, 4, 4);
  auto state = tagger::AdadeltaState::for_model(model);
  auto grads = model.params().zeros_like();
  double& w = model.params().out_b(0, 0);
  w = -2.0;
  const auto before = model.params();
  auto f = [&] { return 0.5 * (w - 3.0) * (w - 3.0); };

  const int burn_in = 50;
  std::vector<double> losses{f()};
  for (int step = 0; step < 500; ++step) {
    grads.out_b(0, 0) = w - 3.0;
    tagger::adadelta_step(state, model, grads, cfg.adadelta_rho, cfg.adadelta_epsilon);
    losses.push_back(f());
  }
  int increases = 0;
  for (std::size_t i = burn_in + 1; i < losses.size(); ++i) increases += losses[i] > losses[i - 1];
  bool others_fixed = true;
  {
    auto a = before.tensors();
    auto b = model.params().tensors();
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i].first == "out.b") continue;
      others_fixed &= *a[i].second == *b[i].second;
    }
  }

  auto frozen = model;
  auto zero_state = tagger::AdadeltaState::for_model(frozen);
  const auto snapshot = frozen.params();
  for (int i = 0; i < 10; ++i) {
    tagger::adadelta_step(zero_state, frozen, frozen.params().zeros_like(), 0.95, 1e-6);
  }
  bool unchanged = true;
  {
    auto a = snapshot.tensors();
    auto b = frozen.params().tensors();
    for (std::size_t i = 0; i < a.size(); ++i) unchanged &= *a[i].second == *b[i].second;
  }
  Outcome o;
  o.pass = increases == 0 && losses.back() < losses[burn_in] && others_fixed && unchanged;
  o.detail = fmt("loss %.3g -> %.3g, ", losses.front(), losses.back()) +
             std::to_string(increases) + " increases after step " + std::to_string(burn_in) +
             ", zero gradient " + (unchanged ? "leaves parameters unchanged" : "moved parameters");
  return o;
}

Outcome end_to_end() {
  const auto start = Clock::now();
  const fs::path dir = fs::current_path() / "acceptance_e2e";
  fs::remove_all(dir);
  auto run = [](std::vector<std::string> args, std::string* out = nullptr) {
    std::ostringstream o, e;
    const int code = cli::run(args, o, e);
    if (out) *out = o.str();
    if (code != 0) std::cerr << "ddix " << args.front() << ": " << e.str();
    return code;
  };
  const auto p = [&](const char* name) { return (dir / name).string(); };
  std::vector<int> codes;
  codes.push_back(run({"synth", "--docs", "120", "--seed", "101", "--format", "foreign",
                       "--out", p("train_foreign")}));
  codes.push_back(run({"convert", "--in", p("train_foreign"), "--out", p("train")}));
  codes.push_back(run({"synth", "--docs", "30", "--seed", "202", "--out", p("heldout")}));
  codes.push_back(run({"train", "--train", p("train"), "--out", p("model"), "--seed", "1",
                       "--epochs", "15", "--patience", "5", "--encoder-size", "32",
                       "--gru-hidden", "16", "--word-dim", "16", "--conv-layers", "2",
                       "--batch-size", "8", "--dropout", "0.1"}));
  codes.push_back(run({"predict", "--model", p("model"), "--in", p("heldout"), "--out",
                       p("pred")}));
  std::string csv;
  codes.push_back(run({"evaluate", "--gold", p("heldout"), "--pred", p("pred"), "--format",
                       "csv"},
                      &csv));
  std::map<std::string, double> f;
  std::istringstream lines(csv);
  for (std::string line; std::getline(lines, line);) {
    // category names may contain commas; the six numeric fields never do
    auto cut = line.size();
    for (int i = 0; i < 6 && cut != std::string::npos && cut > 0; ++i) cut = line.rfind(',', cut - 1);
    if (cut == std::string::npos || line.rfind("category", 0) == 0) continue;
    f[line.substr(0, cut)] = std::stod(line.substr(line.rfind(',') + 1));
  }
  const double t1 = f.count("Task1 (mentions, micro)") ? f["Task1 (mentions, micro)"] : -1;
  const double t2 = f.count("Task2 (interactions)") ? f["Task2 (interactions)"] : -1;
  const double secs = seconds_since(start);
  const bool all_zero = std::all_of(codes.begin(), codes.end(), [](int c) { return c == 0; });
  Outcome o;
  o.pass = all_zero && t1 > 0 && t1 < 1 && t2 > 0 && t2 < 1 && secs < 600;
  o.detail = std::string(all_zero ? "all steps exit 0" : "a step failed") +
             fmt(", held-out task1 F %.4f, task2 F %.4f, %.1f s", t1, t2, secs);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"codec round-trip", codec_round_trip},
      {"shared-head pair", shared_head_pair},
      {"gradient check", gradient_check},
      {"beam vs exhaustive", beam_vs_exhaustive},
      {"overfit", overfit},
      {"oracle-stub pipeline identity", oracle_pipeline},
      {"PK vectors", pk_vectors},
      {"ensemble oracle", ensemble_oracle},
      {"adadelta sanity", adadelta_sanity},
      {"end-to-end smoke", end_to_end},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << "criterion " << (i + 1) << " " << (o.pass ? "PASS" : "FAIL") << "  "
              << criteria[i].first << ": " << o.detail << std::endl;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed")
            << std::endl;
  return failed == 0 ? 0 : 1;
}
