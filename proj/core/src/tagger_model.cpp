#include <cmath>

#include "ddix/tagger.hpp"
#include "tagger_internal.hpp"

namespace ddix::tagger {

void TaggerConfig::validate() const {
  auto positive = [](int v, const char* name) {
    if (v <= 0) throw Error(std::string("tagger config: ") + name + " must be positive");
  };
  positive(early_stopping_patience, "early_stopping_patience");
  if (decoder_output_size < 0) throw Error("tagger config: decoder_output_size must be >= 0");
  positive(encoder_output_size, "encoder_output_size");
  positive(beam_size, "beam_size");
  positive(encoder_filter_size, "encoder_filter_size");
  positive(batch_size, "batch_size");
  positive(conv_layers, "conv_layers");
  positive(word_dim, "word_dim");
  positive(shape_dim, "shape_dim");
  positive(position_dim, "position_dim");
  positive(char_dim, "char_dim");
  positive(label_dim, "label_dim");
  positive(gru_hidden, "gru_hidden");
  positive(position_buckets, "position_buckets");
  positive(max_epochs, "max_epochs");
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
    throw Error("tagger config: dropout_rate must be in [0, 1)");
  }
  if (!(adadelta_rho > 0.0 && adadelta_rho < 1.0)) {
    throw Error("tagger config: adadelta_rho must be in (0, 1)");
  }
  if (!(adadelta_epsilon > 0.0)) throw Error("tagger config: adadelta_epsilon must be positive");
}

namespace {

template <class Blocks, class Fn>
void visit(Blocks& b, Fn&& fn) {
  fn("word_emb", b.word_emb);
  fn("shape_emb", b.shape_emb);
  fn("position_emb", b.position_emb);
  fn("char_emb", b.char_emb);
  fn("label_emb", b.label_emb);
  for (std::size_t i = 0; i < b.conv_w.size(); ++i) {
    fn("conv" + std::to_string(i) + ".w", b.conv_w[i]);
    fn("conv" + std::to_string(i) + ".b", b.conv_b[i]);
  }
  for (auto [prefix, gru] : {std::pair{"gru_fwd.", &b.fwd}, std::pair{"gru_bwd.", &b.bwd}}) {
    std::string p = prefix;
    fn(p + "wz", gru->wz);
    fn(p + "uz", gru->uz);
    fn(p + "bz", gru->bz);
    fn(p + "wr", gru->wr);
    fn(p + "ur", gru->ur);
    fn(p + "br", gru->br);
    fn(p + "wh", gru->wh);
    fn(p + "uh", gru->uh);
    fn(p + "bh", gru->bh);
  }
  fn("out.w", b.out_w);
  fn("out.b", b.out_b);
}

}  // namespace

std::vector<std::pair<std::string, Matrix*>> ParamBlocks::tensors() {
  std::vector<std::pair<std::string, Matrix*>> out;
  visit(*this, [&](const std::string& name, Matrix& m) { out.emplace_back(name, &m); });
  return out;
}

std::vector<std::pair<std::string, const Matrix*>> ParamBlocks::tensors() const {
  std::vector<std::pair<std::string, const Matrix*>> out;
  visit(*this, [&](const std::string& name, const Matrix& m) { out.emplace_back(name, &m); });
  return out;
}

ParamBlocks ParamBlocks::zeros_like() const {
  ParamBlocks z = *this;
  z.set_zero();
  return z;
}

void ParamBlocks::set_zero() {
  for (auto& [name, m] : tensors()) m->setZero();
}

std::size_t ParamBlocks::parameter_count() const {
  std::size_t n = 0;
  for (const auto& [name, m] : tensors()) n += static_cast<std::size_t>(m->size());
  return n;
}

int TaggerModel::input_dim() const {
  return config_.word_dim + config_.shape_dim + config_.position_dim +
         (config_.use_chars ? config_.char_dim : 0);
}

ParamBlocks TaggerModel::shaped_zeros() const {
  const auto& c = config_;
  ParamBlocks p;
  p.word_emb = Matrix::Zero(c.word_dim, word_vocab_size_);
  p.shape_emb = Matrix::Zero(c.shape_dim, features::kShapeClassCount);
  p.position_emb = Matrix::Zero(c.position_dim, c.position_buckets + 1);
  p.char_emb = Matrix::Zero(c.char_dim, char_vocab_size_);
  p.label_emb = Matrix::Zero(c.label_dim, output_size_ + 1);
  int in = input_dim();
  for (int l = 0; l < c.conv_layers; ++l) {
    p.conv_w.push_back(Matrix::Zero(c.encoder_output_size, c.encoder_filter_size * in));
    p.conv_b.push_back(Matrix::Zero(c.encoder_output_size, 1));
    in = c.encoder_output_size;
  }
  for (GruParams* g : {&p.fwd, &p.bwd}) {
    for (Matrix* w : {&g->wz, &g->wr, &g->wh}) *w = Matrix::Zero(c.gru_hidden, in);
    for (Matrix* u : {&g->uz, &g->ur, &g->uh}) *u = Matrix::Zero(c.gru_hidden, c.gru_hidden);
    for (Matrix* b : {&g->bz, &g->br, &g->bh}) *b = Matrix::Zero(c.gru_hidden, 1);
  }
  p.out_w = Matrix::Zero(output_size_, 2 * c.gru_hidden + c.label_dim);
  p.out_b = Matrix::Zero(output_size_, 1);
  return p;
}

TaggerModel::TaggerModel(const TaggerConfig& config, codec::Variant variant, int word_vocab_size,
                         int char_vocab_size)
    : config_(config), scheme_(variant), word_vocab_size_(word_vocab_size),
      char_vocab_size_(char_vocab_size) {
  config_.validate();
  if (word_vocab_size < 2 || char_vocab_size < 2) {
    throw Error("tagger: vocabulary must contain at least PAD and UNK");
  }
  output_size_ = config_.decoder_output_size == 0 ? scheme_.size() : config_.decoder_output_size;
  if (output_size_ < scheme_.size()) {
    throw Error("tagger config: decoder_output_size " + std::to_string(output_size_) +
                " is smaller than the " + std::string(codec::to_string(variant)) +
                " alphabet (" + std::to_string(scheme_.size()) + ")");
  }
  params_ = shaped_zeros();

  detail::Uniform rng(config_.rng_seed);
  for (auto& [name, m] : params_.tensors()) {
    if (name.ends_with("_emb")) {
      for (Eigen::Index i = 0; i < m->size(); ++i) m->data()[i] = rng.uniform(-0.5, 0.5);
    } else if (m->cols() > 1) {
      const double limit = std::sqrt(6.0 / static_cast<double>(m->rows() + m->cols()));
      for (Eigen::Index i = 0; i < m->size(); ++i) m->data()[i] = rng.uniform(-limit, limit);
    }
  }
  // PAD never carries signal.
  params_.word_emb.col(features::Vocab::kPad).setZero();
  params_.char_emb.col(features::Vocab::kPad).setZero();
}

void TaggerModel::check_shapes(const ParamBlocks& blocks) const {
  const ParamBlocks reference = shaped_zeros();
  auto expected = reference.tensors();
  auto actual = blocks.tensors();
  if (expected.size() != actual.size()) {
    throw Error("tagger: expected " + std::to_string(expected.size()) + " tensors, got " +
                std::to_string(actual.size()));
  }
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const Matrix& e = *expected[i].second;
    const Matrix& a = *actual[i].second;
    if (e.rows() != a.rows() || e.cols() != a.cols()) {
      throw Error("tagger: tensor " + expected[i].first + " has shape " +
                  std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + ", expected " +
                  std::to_string(e.rows()) + "x" + std::to_string(e.cols()));
    }
  }
}

TaggerModel TaggerModel::from_parts(const TaggerConfig& config, codec::Variant variant,
                                    ParamBlocks params) {
  config.validate();
  TaggerModel m;
  m.config_ = config;
  m.scheme_ = codec::TagScheme(variant);
  m.output_size_ = config.decoder_output_size == 0 ? m.scheme_.size() : config.decoder_output_size;
  if (m.output_size_ < m.scheme_.size()) throw Error("tagger: decoder_output_size below alphabet");
  m.word_vocab_size_ = static_cast<int>(params.word_emb.cols());
  m.char_vocab_size_ = static_cast<int>(params.char_emb.cols());
  m.check_shapes(params);
  m.params_ = std::move(params);
  if (!m.all_finite()) throw Error("tagger: parameters contain non-finite values");
  return m;
}

bool TaggerModel::all_finite() const {
  for (const auto& [name, m] : params_.tensors()) {
    if (!m->allFinite()) return false;
  }
  return true;
}

}  // namespace ddix::tagger
