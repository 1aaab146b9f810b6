#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "ddix/codec.hpp"
#include "ddix/features.hpp"

namespace ddix::tagger {

using Matrix = Eigen::MatrixXd;

// Defaults follow the published setting: patience 10, encoder output 400,
// beam 8, filter width 3, dropout 0.25, batch 32, three conv layers.
struct TaggerConfig {
  int early_stopping_patience = 10;
  int decoder_output_size = 0;  // 0 means "alphabet size"; larger adds unused labels
  int encoder_output_size = 400;
  int beam_size = 8;
  int encoder_filter_size = 3;
  double dropout_rate = 0.25;
  int batch_size = 32;
  int conv_layers = 3;

  int word_dim = 50;
  int shape_dim = 4;
  int position_dim = 8;
  int char_dim = 16;
  int label_dim = 8;
  int gru_hidden = 64;
  int position_buckets = 40;  // buckets beyond the last share its embedding
  bool use_chars = false;

  double adadelta_rho = 0.95;
  double adadelta_epsilon = 1e-6;
  int max_epochs = 100;
  std::uint64_t rng_seed = 1;

  // Throws Error when a size is non-positive or dropout is outside [0, 1).
  void validate() const;
  friend bool operator==(const TaggerConfig&, const TaggerConfig&) = default;
};

struct GruParams {
  Matrix wz, uz, bz;
  Matrix wr, ur, br;
  Matrix wh, uh, bh;
};

// Every learnable tensor. Embedding tables store one entry per column.
// Biases are single-column matrices so all blocks share one type.
struct ParamBlocks {
  Matrix word_emb, shape_emb, position_emb, char_emb, label_emb;
  std::vector<Matrix> conv_w;  // out x (filter * in), one per layer
  std::vector<Matrix> conv_b;
  GruParams fwd, bwd;
  Matrix out_w, out_b;

  std::vector<std::pair<std::string, Matrix*>> tensors();
  std::vector<std::pair<std::string, const Matrix*>> tensors() const;
  // Same shapes, all zeros.
  ParamBlocks zeros_like() const;
  void set_zero();
  std::size_t parameter_count() const;
};

using Gradients = ParamBlocks;

class TaggerModel {
 public:
  TaggerModel() = default;
  // Random initialisation from config.rng_seed.
  TaggerModel(const TaggerConfig& config, codec::Variant variant, int word_vocab_size,
              int char_vocab_size);

  const TaggerConfig& config() const { return config_; }
  const codec::TagScheme& scheme() const { return scheme_; }
  int alphabet_size() const { return scheme_.size(); }
  int output_size() const { return output_size_; }
  int start_label() const { return output_size_; }
  int input_dim() const;

  ParamBlocks& params() { return params_; }
  const ParamBlocks& params() const { return params_; }

  // Restores a model from saved pieces; shapes are checked against config.
  static TaggerModel from_parts(const TaggerConfig& config, codec::Variant variant,
                                ParamBlocks params);
  void check_shapes(const ParamBlocks& blocks) const;
  bool all_finite() const;

 private:
  TaggerConfig config_;
  codec::TagScheme scheme_{codec::Variant::BIOHD};
  int output_size_ = 0;
  int word_vocab_size_ = 0;
  int char_vocab_size_ = 0;
  ParamBlocks params_;

  ParamBlocks shaped_zeros() const;
};

using Rows = std::vector<features::FeatureRow>;

// Conv stack over the concatenated per-token embeddings: one column per
// token, encoder_output_size rows. Zero padding keeps the length. Dropout on
// the embeddings and between conv layers applies only when train_mode is set;
// masks come from `rng` (or a generator seeded from the config when null).
Matrix encode_cnn(const TaggerModel& model, const Rows& rows, bool train_mode,
                  std::mt19937_64* rng = nullptr);

// Log-probabilities, one row per step and one column per output label, for
// the given previous-label sequence (prev_label_ids[0] is the start label).
Matrix decode_scores(const TaggerModel& model, const Matrix& encoded,
                     const std::vector<int>& prev_label_ids);

// Previous-label ids for teacher forcing: start label, then tags shifted by one.
std::vector<int> shifted_labels(const TaggerModel& model, const std::vector<int>& tags);

// Negative log-likelihood of the gold tags under teacher forcing.
double loss(const TaggerModel& model, const Rows& rows, const std::vector<int>& gold);

// Adds scale * d(loss)/d(params) to `grads` and returns the loss. With a
// non-null rng the forward pass runs in training mode (dropout on).
double accumulate_gradients(const TaggerModel& model, const Rows& rows,
                            const std::vector<int>& gold, Gradients& grads, double scale = 1.0,
                            std::mt19937_64* dropout_rng = nullptr);

Gradients grad(const TaggerModel& model, const Rows& rows, const std::vector<int>& gold);

struct BeamResult {
  std::vector<int> tags;
  double score = 0.0;
};

// Which labels a search may emit: the scheme alphabet, or every decoder
// output including the extra ones a larger decoder_output_size adds.
enum class LabelSet { Alphabet, AllOutputs };

// Left-to-right beam search over previous-label conditioning. The score is
// the summed log-probability; ties prefer the alphabetically earlier
// sequence (alphabet order, first differing tag).
BeamResult beam_decode(const TaggerModel& model, const Rows& rows, int beam_size,
                       LabelSet labels = LabelSet::Alphabet);

// Sum of log P(tag_t | rows, tag_{t-1}). Throws Error on a length mismatch.
double score_sequence(const TaggerModel& model, const Rows& rows, const std::vector<int>& tags);

struct AdadeltaState {
  ParamBlocks sq_grad;    // running average of squared gradients
  ParamBlocks sq_update;  // running average of squared updates

  static AdadeltaState for_model(const TaggerModel& model);
};

void adadelta_step(AdadeltaState& state, TaggerModel& model, const Gradients& grads,
                   double rho, double epsilon);

// Optimiser and early-stopping bookkeeping for one training run.
struct TrainState {
  AdadeltaState adadelta;
  int epoch = 0;
  double best_score = -1.0;
  int best_epoch = 0;
  int patience_used = 0;  // epochs since the last improvement
};

struct TaggingExample {
  Rows rows;
  std::vector<int> gold;
};

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;  // mean per-sentence NLL over the epoch
  double val_f1 = 0.0;

  friend bool operator==(const EpochRecord&, const EpochRecord&) = default;
};

struct TrainHistory {
  std::vector<EpochRecord> epochs;
  int best_epoch = 0;
  double best_val_f1 = 0.0;
  bool early_stopped = false;

  int epochs_run() const { return static_cast<int>(epochs.size()); }
  friend bool operator==(const TrainHistory&, const TrainHistory&) = default;
};

struct TrainResult {
  TaggerModel model;  // best-on-validation parameters
  TrainHistory history;
};

using EpochCallback = std::function<void(const EpochRecord&)>;

// Mini-batch Adadelta with early stopping on validation mention F1. An empty
// validation set falls back to the training set. Throws Error on an empty
// training set.
TrainResult train(TaggerModel model, const std::vector<TaggingExample>& train_set,
                  const std::vector<TaggingExample>& val_set, const EpochCallback& on_epoch = {});

// Mention-level micro F1 of beam-decoded output against gold tags.
double mention_f1(const TaggerModel& model, const std::vector<TaggingExample>& examples,
                  int beam_size);

// JSON checkpoint with a format version, config echo, optional vocabulary
// reference and every tensor under its name.
std::string save_checkpoint(const TaggerModel& model, std::string_view vocab_ref = {});
struct Checkpoint {
  TaggerModel model;
  std::string vocab_ref;
};
Checkpoint load_checkpoint(std::string_view text);

}  // namespace ddix::tagger
