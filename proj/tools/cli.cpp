#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "ddix/corpus.hpp"
#include "ddix/eval.hpp"
#include "ddix/io.hpp"
#include "ddix/pipeline.hpp"
#include "ddix/pksubtype.hpp"
#include "ddix/tagger.hpp"

namespace ddix::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kNativeExt = ".ddi";
constexpr const char* kForeignExt = ".fdi";
constexpr const char* kVocabFile = "vocab.tsv";
constexpr const char* kStepFiles[] = {"step1.json", "step2.json", "step3.json"};

struct Common {
  std::uint64_t seed = 1;
  std::string out;
  std::string config;
};

void add_common(CLI::App* sub, Common& c, bool needs_out) {
  sub->add_option("--config", c.config,
                  "File of key = value lines; command-line flags take priority");
  sub->add_option("--seed", c.seed, "Random seed")->capture_default_str();
  auto* out = sub->add_option("--out", c.out, "Output path");
  if (needs_out) out->required();
}

void add_tagger_flags(CLI::App* sub, tagger::TaggerConfig& c) {
  sub->add_option("--patience", c.early_stopping_patience)->capture_default_str();
  sub->add_option("--decoder-output-size", c.decoder_output_size,
                  "Output classes; 0 uses the tag alphabet size")
      ->capture_default_str();
  sub->add_option("--encoder-size", c.encoder_output_size)->capture_default_str();
  sub->add_option("--beam", c.beam_size)->capture_default_str();
  sub->add_option("--filter-size", c.encoder_filter_size)->capture_default_str();
  sub->add_option("--dropout", c.dropout_rate)->capture_default_str();
  sub->add_option("--batch-size", c.batch_size)->capture_default_str();
  sub->add_option("--conv-layers", c.conv_layers)->capture_default_str();
  sub->add_option("--word-dim", c.word_dim)->capture_default_str();
  sub->add_option("--shape-dim", c.shape_dim)->capture_default_str();
  sub->add_option("--position-dim", c.position_dim)->capture_default_str();
  sub->add_option("--char-dim", c.char_dim)->capture_default_str();
  sub->add_option("--label-dim", c.label_dim)->capture_default_str();
  sub->add_option("--gru-hidden", c.gru_hidden)->capture_default_str();
  sub->add_option("--position-buckets", c.position_buckets)->capture_default_str();
  sub->add_option("--rho", c.adadelta_rho)->capture_default_str();
  sub->add_option("--epsilon", c.adadelta_epsilon)->capture_default_str();
  sub->add_option("--epochs", c.max_epochs, "Maximum epochs")->capture_default_str();
}

// A file is taken as is; a directory contributes its files with the given
// extension, in name order.
std::vector<fs::path> input_files(const std::string& path, std::string_view ext) {
  std::error_code ec;
  if (fs::is_regular_file(path, ec)) return {path};
  if (!fs::is_directory(path, ec)) throw IoError("no such file or directory: " + path);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(path)) {
    const auto name = entry.path().filename().string();
    if (entry.is_regular_file() && !name.starts_with('.') && entry.path().extension() == ext) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

template <class Fn>
auto with_path(const fs::path& path, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const IoError&) {
    throw;
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), 0, 0);
  } catch (const Error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

std::vector<corpus::Document> load_documents(const std::string& path) {
  std::vector<corpus::Document> docs;
  for (const auto& file : input_files(path, kNativeExt)) {
    auto text = read_file(file);
    auto parsed = with_path(file, [&] { return corpus::parse_documents(text); });
    for (auto& d : parsed) docs.push_back(std::move(d));
  }
  return docs;
}

fs::path prepare_out_dir(const std::string& out) {
  fs::path dir(out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + out);
  return dir;
}

void write_documents(const fs::path& dir, const std::vector<corpus::Document>& docs) {
  for (const auto& d : docs) {
    write_file_atomic(dir / (d.id + kNativeExt), corpus::serialize_document(d));
  }
}

std::shared_ptr<const features::Vocab> load_vocab(const fs::path& path) {
  auto text = read_file(path);
  return std::make_shared<const features::Vocab>(
      with_path(path, [&] { return features::Vocab::parse(text); }));
}

struct StepModels {
  std::shared_ptr<const features::Vocab> vocab;
  std::shared_ptr<const pipeline::NeuralTagger> steps[3];
};

StepModels load_model_dir(const std::string& dir, int beam) {
  StepModels m;
  std::string vocab_ref;
  for (int i = 0; i < 3; ++i) {
    const fs::path file = fs::path(dir) / kStepFiles[i];
    auto text = read_file(file);
    auto ck = with_path(file, [&] { return tagger::load_checkpoint(text); });
    const std::string ref = ck.vocab_ref.empty() ? kVocabFile : ck.vocab_ref;
    if (i == 0) {
      vocab_ref = ref;
      m.vocab = load_vocab(fs::path(dir) / ref);
    } else if (ref != vocab_ref) {
      throw ValidationError(file.string() + ": refers to vocabulary " + ref + ", step 1 uses " +
                            vocab_ref);
    }
    if (ck.model.params().word_emb.cols() != m.vocab->word_count() ||
        ck.model.params().char_emb.cols() != m.vocab->char_count()) {
      throw ValidationError(file.string() + ": embedding tables do not match " + vocab_ref);
    }
    const int b = beam > 0 ? beam : ck.model.config().beam_size;
    m.steps[i] = std::make_shared<const pipeline::NeuralTagger>(
        std::make_shared<const tagger::TaggerModel>(std::move(ck.model)), m.vocab, b);
  }
  return m;
}

std::string format_spans(const std::vector<Span>& spans) {
  std::string out;
  for (const auto& s : spans) out += (out.empty() ? "" : ";") + s.to_string();
  return out.empty() ? "-" : out;
}

std::string format_trace(const corpus::Document& doc,
                         const std::vector<pipeline::StepTrace>& trace) {
  std::string out;
  for (const auto& t : trace) {
    out += "# " + doc.id + " sentence " + std::to_string(t.sentence) + " step " +
           std::to_string(t.step) + " anchors " + format_spans(t.anchors) + "\n";
    const auto& tokens = doc.sentences[t.sentence].tokens;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      out += tokens[i].text + "\t" + t.tags[i] + "\n";
    }
  }
  return out;
}

pksubtype::Dictionaries load_dicts(const std::string& trend, const std::string& param) {
  if (trend.empty() && param.empty()) return pksubtype::Dictionaries::seed();
  auto seed = pksubtype::Dictionaries::seed();
  pksubtype::Dictionaries d;
  if (trend.empty()) {
    d.trend = seed.trend;
  } else {
    auto text = read_file(trend);
    d.trend = with_path(trend, [&] { return pksubtype::parse_trend_dict(text); });
  }
  if (param.empty()) {
    d.param = seed.param;
  } else {
    auto text = read_file(param);
    d.param = with_path(param, [&] { return pksubtype::parse_param_dict(text); });
  }
  return d;
}

Span parse_span_arg(const std::string& text, int token_count, const char* what) {
  Span span;
  try {
    span = Span::parse(text);
  } catch (const Error& e) {
    throw ValidationError(std::string("malformed ") + what + " span '" + text + "'");
  }
  if (auto problem = check_span(span, token_count)) {
    throw ValidationError(std::string(what) + " span " + text + ": " + *problem);
  }
  return span;
}

struct PredictFlags {
  std::string in;
  std::vector<std::string> models;
  int beam = 0;
  bool dump_tags = false;
  bool dump_scores = false;
  bool no_pd_fallback = false;
  std::string trend_dict, param_dict;
};

void add_predict_flags(CLI::App* sub, PredictFlags& f, bool ensemble) {
  sub->add_option("--in", f.in, "Document file or directory")->required();
  if (ensemble) {
    sub->add_option("--models", f.models, "Three model directories")->required()->expected(3);
    sub->add_flag("--dump-score-table", f.dump_scores,
                  "Write the per-sentence proposal score tables to <out>/scores.txt");
  } else {
    sub->add_option("--model", f.models, "Model directory from `ddix train`")
        ->required()
        ->expected(1);
  }
  sub->add_option("--beam", f.beam, "Beam size (default: from the checkpoint)");
  sub->add_flag("--dump-tags", f.dump_tags, "Write every step's tags to <out>/tags.txt");
  sub->add_flag("--no-pd-fallback", f.no_pd_fallback,
                "Drop PD interactions whose real trigger is not found");
  sub->add_option("--trend-dict", f.trend_dict, "Trend keyword file");
  sub->add_option("--param-dict", f.param_dict, "PK parameter keyword file");
}

// Wraps the ensemble step taggers so their score tables can be dumped.
class RecordingEnsemble : public pipeline::SequenceTagger {
 public:
  RecordingEnsemble(pipeline::EnsembleTagger inner, int step, std::string* log)
      : inner_(std::move(inner)), step_(step), log_(log) {}
  const codec::TagScheme& scheme() const override { return inner_.scheme(); }
  std::vector<int> tag(const pipeline::TaggingQuery& q) const override {
    if (q.sentence->tokens.empty()) return {};
    auto r = inner_.decode(q);
    if (log_) {
      char buf[64];
      *log_ += "# " + q.document->id + " sentence " + std::to_string(q.sentence_index) +
               " step " + std::to_string(step_) + " anchors " + format_spans(q.anchors) + "\n";
      for (std::size_t k = 0; k < r.proposals.size(); ++k) {
        const auto& p = r.proposals[k];
        *log_ += "MS" + std::to_string(p.source_model + 1);
        for (double s : p.per_model_scores) {
          std::snprintf(buf, sizeof buf, "\t%.6f", s);
          *log_ += buf;
        }
        std::snprintf(buf, sizeof buf, "\ttotal=%.6f", p.total);
        *log_ += buf;
        if (!p.merged_from.empty()) {
          *log_ += "\talso_from=";
          for (int m : p.merged_from) *log_ += "MS" + std::to_string(m + 1) + " ";
          log_->pop_back();
        }
        if (static_cast<int>(k) == r.winner) *log_ += "\twinner";
        *log_ += "\t" + format_sequence(p.sequence) + "\n";
      }
    }
    return r.sequence;
  }

 private:
  std::string format_sequence(const std::vector<int>& ids) const {
    std::string out;
    for (const auto& t : scheme().to_tags(ids)) out += (out.empty() ? "" : " ") + t;
    return out;
  }

  pipeline::EnsembleTagger inner_;
  int step_;
  std::string* log_;
};

int do_predict(const Common& common, const PredictFlags& f, bool ensemble, std::ostream& err) {
  const auto dicts = load_dicts(f.trend_dict, f.param_dict);
  const auto docs = load_documents(f.in);
  std::string score_log;
  pipeline::PipelineModels models;
  if (ensemble) {
    std::vector<StepModels> members;
    for (const auto& dir : f.models) members.push_back(load_model_dir(dir, f.beam));
    std::shared_ptr<const pipeline::SequenceTagger>* slots[3] = {&models.step1, &models.step2,
                                                                 &models.step3};
    for (int i = 0; i < 3; ++i) {
      std::vector<std::shared_ptr<const pipeline::NeuralTagger>> step;
      for (const auto& m : members) step.push_back(m.steps[i]);
      const int beam = f.beam > 0 ? f.beam : step.front()->model().config().beam_size;
      *slots[i] = std::make_shared<RecordingEnsemble>(
          pipeline::EnsembleTagger(std::move(step), beam), i + 1,
          f.dump_scores ? &score_log : nullptr);
    }
  } else {
    auto m = load_model_dir(f.models.front(), f.beam);
    models = {m.steps[0], m.steps[1], m.steps[2]};
  }
  models.check();

  pipeline::PipelineOptions options;
  options.pd_fallback_to_specific_interaction = !f.no_pd_fallback;
  const fs::path out = prepare_out_dir(common.out);
  std::string tag_log;
  std::vector<corpus::Document> predicted;
  for (const auto& doc : docs) {
    std::vector<pipeline::StepTrace> trace;
    auto result =
        pipeline::run_pipeline(models, doc, dicts, options, f.dump_tags ? &trace : nullptr);
    predicted.push_back(pipeline::with_predictions(doc, result));
    if (f.dump_tags) tag_log += format_trace(doc, trace);
  }
  write_documents(out, predicted);
  if (f.dump_tags) write_file_atomic(out / "tags.txt", tag_log);
  if (f.dump_scores) write_file_atomic(out / "scores.txt", score_log);
  err << "predicted " << predicted.size() << " document(s) into " << out.string() << "\n";
  return 0;
}

std::vector<std::string> config_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Turns the lines of a --config file into flags, skipping any flag already
// on the command line. Unknown keys surface as unknown flags.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].starts_with("--config=")) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  auto given = [&](const std::string& flag) {
    return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
      return a == flag || a.starts_with(flag + "=");
    });
  };
  const auto text = read_file(path);
  std::vector<std::string> extra;
  int line_no = 0;
  for (auto line : config_lines(text)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';' || line[0] == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError(path + ": expected key = value", line_no, 1);
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') &&
        value.back() == value.front()) {
      value = value.substr(1, value.size() - 2);
    }
    std::replace(key.begin(), key.end(), '_', '-');
    const std::string flag = "--" + key;
    if (key == "config" || given(flag)) continue;
    extra.push_back(flag + "=" + value);
  }
  args.insert(args.end(), extra.begin(), extra.end());
  return args;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Drug-drug interaction extraction from drug labels", "ddix"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  // convert
  Common convert_common;
  std::string convert_in;
  auto* convert = app.add_subcommand("convert", "Convert foreign-format documents");
  add_common(convert, convert_common, true);
  convert->add_option("--in", convert_in, "Foreign document file or directory")->required();

  // synth
  Common synth_common;
  int synth_docs = 50;
  std::string synth_format = "native";
  auto* synth = app.add_subcommand("synth", "Generate a synthetic annotated corpus");
  add_common(synth, synth_common, true);
  synth->add_option("--docs", synth_docs, "Number of documents")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  synth->add_option("--format", synth_format, "native or foreign")
      ->capture_default_str()
      ->check(CLI::IsMember({"native", "foreign"}));

  // train
  Common train_common;
  tagger::TaggerConfig train_cfg;
  std::string train_in, train_val, train_vocab;
  double val_fraction = 0.1;
  bool train_sequential = false;
  bool train_verbose = false;
  std::string train_chars = "triggers";
  auto* train = app.add_subcommand("train", "Train the three step taggers");
  add_common(train, train_common, true);
  train->add_option("--train", train_in, "Training document file or directory")->required();
  train->add_option("--val", train_val, "Validation documents (default: split from --train)");
  train->add_option("--val-fraction", val_fraction,
                    "Share of training documents held out when --val is absent")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 0.9));
  train->add_option("--vocab", train_vocab, "Use this vocabulary file instead of fitting one");
  train->add_flag("--sequential", train_sequential, "Train the steps one after another");
  train->add_flag("--verbose", train_verbose, "Log the training report to the error stream");
  train->add_option("--chars", train_chars,
                    "Mean-pooled character embeddings: none, triggers (steps 2 and 3) or all")
      ->capture_default_str()
      ->check(CLI::IsMember({"none", "triggers", "all"}));
  add_tagger_flags(train, train_cfg);

  // predict / ensemble-predict
  Common predict_common, ens_common;
  PredictFlags predict_flags, ens_flags;
  auto* predict = app.add_subcommand("predict", "Extract mentions and interactions");
  add_common(predict, predict_common, true);
  add_predict_flags(predict, predict_flags, false);
  auto* ens = app.add_subcommand("ensemble-predict", "Predict with three models combined");
  add_common(ens, ens_common, true);
  add_predict_flags(ens, ens_flags, true);

  // evaluate
  Common eval_common;
  std::string gold_in, pred_in, eval_format = "both";
  auto* evaluate = app.add_subcommand("evaluate", "Score predictions against gold documents");
  add_common(evaluate, eval_common, false);
  evaluate->add_option("--gold", gold_in, "Gold documents")->required();
  evaluate->add_option("--pred", pred_in, "Predicted documents")->required();
  evaluate->add_option("--format", eval_format, "table, csv or both")
      ->capture_default_str()
      ->check(CLI::IsMember({"table", "csv", "both"}));

  // pk-classify
  Common pk_common;
  std::string pk_sentence, pk_trigger, pk_precipitant, pk_trend, pk_param, pk_codes;
  std::vector<std::string> pk_labels;
  auto* pk = app.add_subcommand("pk-classify", "Classify one PK interaction");
  add_common(pk, pk_common, false);
  pk->add_option("--sentence", pk_sentence, "Sentence text")->required();
  pk->add_option("--trigger", pk_trigger, "Trigger token span, e.g. 3-4")->required();
  pk->add_option("--precipitant", pk_precipitant, "Precipitant token span")->required();
  pk->add_option("--label-drug", pk_labels, "Label drug name (repeat for aliases)");
  pk->add_option("--trend-dict", pk_trend, "Trend keyword file");
  pk->add_option("--param-dict", pk_param, "PK parameter keyword file");
  pk->add_option("--codes", pk_codes, "Mapping from subtype codes to external ids");

  // tag-debug
  Common dbg_common;
  std::string dbg_checkpoint, dbg_vocab, dbg_sentence;
  std::vector<std::string> dbg_anchors;
  int dbg_beam = 0;
  auto* dbg = app.add_subcommand("tag-debug", "Tag one sentence with one checkpoint");
  add_common(dbg, dbg_common, false);
  dbg->add_option("--checkpoint", dbg_checkpoint, "Tagger checkpoint")->required();
  dbg->add_option("--vocab", dbg_vocab, "Vocabulary (default: the checkpoint's reference)");
  dbg->add_option("--sentence", dbg_sentence, "Sentence text")->required();
  dbg->add_option("--anchor", dbg_anchors, "Anchor token span (repeatable)");
  dbg->add_option("--beam", dbg_beam, "Beam size (default: from the checkpoint)");

  std::vector<std::string> expanded;
  try {
    expanded = expand_config(args);
  } catch (const Error& e) {
    err << "ddix: " << e.what() << "\n";
    return 2;
  }
  try {
    std::vector<std::string> reversed(expanded.rbegin(), expanded.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "ddix: " << e.what() << "\n";
    const CLI::App* failing = &app;
    for (auto* sub : app.get_subcommands()) failing = sub;
    err << failing->help();
    return 1;
  }

  try {
    if (*convert) {
      const fs::path dir = prepare_out_dir(convert_common.out);
      std::vector<corpus::Document> docs;
      for (const auto& file : input_files(convert_in, kForeignExt)) {
        auto text = read_file(file);
        auto foreign = with_path(file, [&] { return corpus::parse_foreign_documents(text); });
        for (const auto& f : foreign) {
          docs.push_back(with_path(file, [&] { return corpus::convert_nlm180(f); }));
        }
      }
      write_documents(dir, docs);
      err << "converted " << docs.size() << " document(s)\n";
      return 0;
    }

    if (*synth) {
      const fs::path dir = prepare_out_dir(synth_common.out);
      const auto docs = corpus::synth_corpus(synth_common.seed, synth_docs);
      if (synth_format == "native") {
        write_documents(dir, docs);
      } else {
        for (const auto& d : docs) {
          write_file_atomic(dir / (d.id + kForeignExt),
                            corpus::serialize_foreign_document(corpus::export_foreign(d)));
        }
      }
      err << "wrote " << docs.size() << " " << synth_format << " document(s)\n";
      return 0;
    }

    if (*train) {
      auto docs = load_documents(train_in);
      if (docs.empty()) throw ValidationError("no documents in " + train_in);
      std::vector<corpus::Document> val;
      if (!train_val.empty()) {
        val = load_documents(train_val);
      } else if (docs.size() >= 2 && val_fraction > 0.0) {
        auto n = static_cast<std::size_t>(std::ceil(val_fraction * docs.size()));
        n = std::clamp<std::size_t>(n, 1, docs.size() - 1);
        val.assign(docs.end() - static_cast<std::ptrdiff_t>(n), docs.end());
        docs.resize(docs.size() - n);
      }
      pipeline::PipelineTrainConfig cfg;
      cfg.step1 = cfg.step2 = cfg.step3 = train_cfg;
      cfg.step1.rng_seed = train_common.seed;
      cfg.step2.rng_seed = train_common.seed + 1;
      cfg.step3.rng_seed = train_common.seed + 2;
      cfg.step1.use_chars = train_chars == "all";
      cfg.step2.use_chars = cfg.step3.use_chars = train_chars != "none";
      cfg.step1.validate();
      cfg.parallel = !train_sequential;
      if (!train_vocab.empty()) cfg.vocab = *load_vocab(train_vocab);

      const fs::path dir = prepare_out_dir(train_common.out);
      auto trained = pipeline::train_pipeline(docs, val, cfg);
      write_file_atomic(dir / kVocabFile, trained.vocab.serialize());
      const tagger::TaggerModel* steps[] = {&trained.step1, &trained.step2, &trained.step3};
      for (int i = 0; i < 3; ++i) {
        write_file_atomic(dir / kStepFiles[i], tagger::save_checkpoint(*steps[i], kVocabFile));
      }
      write_file_atomic(dir / "report.txt", trained.report);
      if (train_verbose) err << trained.report;
      err << "trained step1 (" << trained.history1.epochs_run() << " epochs), step2 ("
          << trained.history2.epochs_run() << "), step3 (" << trained.history3.epochs_run()
          << ") into " << dir.string() << "\n";
      return 0;
    }

    if (*predict) return do_predict(predict_common, predict_flags, false, err);
    if (*ens) return do_predict(ens_common, ens_flags, true, err);

    if (*evaluate) {
      const auto scores =
          eval::score_corpus(load_documents(gold_in), load_documents(pred_in));
      std::string text;
      if (eval_format != "csv") text += eval::format_table(scores);
      if (eval_format == "both") text += "\n";
      if (eval_format != "table") text += eval::format_csv(scores);
      if (!eval_common.out.empty()) {
        write_file_atomic(eval_common.out, text);
      } else {
        out << text;
      }
      return 0;
    }

    if (*pk) {
      const auto dicts = load_dicts(pk_trend, pk_param);
      const auto codes = pk_codes.empty() ? pksubtype::CodeTable{}
                                          : pksubtype::CodeTable::load(pk_codes);
      const auto sentence = corpus::Sentence::from_text(pk_sentence);
      const Span trigger = parse_span_arg(pk_trigger, sentence.size(), "trigger");
      const Span precipitant = parse_span_arg(pk_precipitant, sentence.size(), "precipitant");
      const auto labels = corpus::find_occurrences(sentence, pk_labels);
      const auto c = pksubtype::classify(sentence, trigger, precipitant, labels, dicts);
      out << codes.render(c.subtype) << "\n";
      if (c.low_confidence()) {
        err << "low confidence:" << (c.trend_defaulted ? " trend defaulted to INCREASED" : "")
            << (c.param_defaulted ? " parameter defaulted to LEVEL" : "") << "\n";
      }
      return 0;
    }

    if (*dbg) {
      auto text = read_file(dbg_checkpoint);
      auto ck = with_path(dbg_checkpoint, [&] { return tagger::load_checkpoint(text); });
      fs::path vocab_path = dbg_vocab;
      if (vocab_path.empty()) {
        vocab_path = fs::path(dbg_checkpoint).parent_path() /
                     (ck.vocab_ref.empty() ? kVocabFile : ck.vocab_ref);
      }
      const auto vocab = load_vocab(vocab_path);
      const auto sentence = corpus::Sentence::from_text(dbg_sentence);
      if (sentence.tokens.empty()) throw ValidationError("empty sentence");
      std::vector<Span> anchors;
      for (const auto& a : dbg_anchors) {
        anchors.push_back(parse_span_arg(a, sentence.size(), "anchor"));
      }
      const auto rows = features::build_rows(sentence, anchors, *vocab);
      const int beam = dbg_beam > 0 ? dbg_beam : ck.model.config().beam_size;
      const auto result = tagger::beam_decode(ck.model, rows, beam);
      const auto tags = ck.model.scheme().to_tags(result.tags);
      for (std::size_t i = 0; i < tags.size(); ++i) {
        out << i << "\t" << sentence.tokens[i].text << "\t" << tags[i] << "\tpos="
            << rows[i].position << "\n";
      }
      char buf[64];
      std::snprintf(buf, sizeof buf, "score\t%.6f\n", result.score);
      out << buf;
      for (const auto& m : codec::decode(tags, ck.model.scheme())) {
        out << "mention\t" << m.span.to_string() << "\t" << sentence.span_text(m.span)
            << (m.ddi ? "\t" + std::string(to_string(*m.ddi)) : "") << "\n";
      }
      return 0;
    }
  } catch (const Error& e) {
    err << "ddix: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "ddix: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace ddix::cli
