#include <algorithm>
#include <cmath>

#include "ddix/tagger.hpp"
#include "tagger_internal.hpp"

namespace ddix::tagger {

using Eigen::VectorXd;

namespace detail {

int position_index(const TaggerConfig& config, int bucket) {
  if (bucket == features::kAbsentAnchor) return config.position_buckets;
  return std::clamp(bucket, 0, config.position_buckets - 1);
}

Matrix embed(const TaggerModel& model, const Rows& rows) {
  const auto& c = model.config();
  const auto& p = model.params();
  const int T = static_cast<int>(rows.size());
  Matrix x = Matrix::Zero(model.input_dim(), T);
  for (int t = 0; t < T; ++t) {
    const auto& row = rows[t];
    int word = row.word_id;
    if (word < 0 || word >= p.word_emb.cols()) word = features::Vocab::kUnk;
    int off = 0;
    x.col(t).segment(off, c.word_dim) = p.word_emb.col(word);
    off += c.word_dim;
    x.col(t).segment(off, c.shape_dim) = p.shape_emb.col(static_cast<int>(row.shape));
    off += c.shape_dim;
    x.col(t).segment(off, c.position_dim) = p.position_emb.col(position_index(c, row.position));
    off += c.position_dim;
    if (c.use_chars && !row.char_ids.empty()) {
      VectorXd sum = VectorXd::Zero(c.char_dim);
      for (int ch : row.char_ids) {
        if (ch < 0 || ch >= p.char_emb.cols()) ch = features::Vocab::kUnk;
        sum += p.char_emb.col(ch);
      }
      x.col(t).segment(off, c.char_dim) = sum / static_cast<double>(row.char_ids.size());
    }
  }
  return x;
}

VectorXd log_softmax(const VectorXd& logits) {
  const double m = logits.maxCoeff();
  const double lse = m + std::log((logits.array() - m).exp().sum());
  return logits.array() - lse;
}

}  // namespace detail

namespace {

using detail::ForwardCache;
using detail::GruStep;

Matrix dropout_mask(int rows, int cols, double rate, std::mt19937_64& rng) {
  Matrix mask(rows, cols);
  const double keep = 1.0 - rate;
  for (Eigen::Index j = 0; j < mask.cols(); ++j) {
    for (Eigen::Index i = 0; i < mask.rows(); ++i) {
      mask(i, j) = detail::unit_draw(rng) < rate ? 0.0 : 1.0 / keep;
    }
  }
  return mask;
}

Matrix windows(const Matrix& x, int filter) {
  const Eigen::Index in = x.rows();
  const Eigen::Index T = x.cols();
  const int left = (filter - 1) / 2;
  Matrix w = Matrix::Zero(filter * in, T);
  for (Eigen::Index t = 0; t < T; ++t) {
    for (int k = 0; k < filter; ++k) {
      const Eigen::Index src = t + k - left;
      if (src >= 0 && src < T) w.col(t).segment(k * in, in) = x.col(src);
    }
  }
  return w;
}

VectorXd sigmoid(const VectorXd& a) { return (1.0 + (-a.array()).exp()).inverse(); }

GruStep gru_step(const GruParams& g, const VectorXd& x, const VectorXd& h_prev) {
  GruStep s;
  s.h_prev = h_prev;
  s.z = sigmoid(g.wz * x + g.uz * h_prev + g.bz.col(0));
  s.r = sigmoid(g.wr * x + g.ur * h_prev + g.br.col(0));
  s.n = (g.wh * x + g.uh * (s.r.cwiseProduct(h_prev)) + g.bh.col(0)).array().tanh();
  s.h = (1.0 - s.z.array()) * s.n.array() + s.z.array() * h_prev.array();
  return s;
}

bool training(bool train_mode, const TaggerConfig& c) { return train_mode && c.dropout_rate > 0.0; }

void run_encoder(const TaggerModel& model, const Rows& rows, std::mt19937_64* rng,
                 ForwardCache& cache) {
  const auto& c = model.config();
  const auto& p = model.params();
  const bool drop = rng != nullptr && training(true, c);
  cache.length = static_cast<int>(rows.size());
  cache.input = detail::embed(model, rows);
  if (drop) {
    cache.input_mask = dropout_mask(static_cast<int>(cache.input.rows()), cache.length,
                                    c.dropout_rate, *rng);
    cache.input = cache.input.cwiseProduct(cache.input_mask);
  }
  Matrix x = cache.input;
  for (int l = 0; l < c.conv_layers; ++l) {
    cache.windows.push_back(windows(x, c.encoder_filter_size));
    Matrix pre = p.conv_w[l] * cache.windows.back();
    pre.colwise() += p.conv_b[l].col(0);
    x = pre.cwiseMax(0.0);
    cache.pre.push_back(std::move(pre));
    if (drop && l + 1 < c.conv_layers) {
      cache.between_mask.push_back(
          dropout_mask(static_cast<int>(x.rows()), cache.length, c.dropout_rate, *rng));
      x = x.cwiseProduct(cache.between_mask.back());
    }
  }
  cache.encoded = std::move(x);
}

// BiGRU states stacked with previous-label embeddings.
void run_recurrence(const TaggerModel& model, const Matrix& encoded, ForwardCache& cache) {
  const auto& c = model.config();
  const auto& p = model.params();
  const int T = static_cast<int>(encoded.cols());
  const int H = c.gru_hidden;
  cache.fwd.assign(T, {});
  cache.bwd.assign(T, {});
  cache.states = Matrix::Zero(2 * H + c.label_dim, T);
  VectorXd h = VectorXd::Zero(H);
  for (int t = 0; t < T; ++t) {
    cache.fwd[t] = gru_step(p.fwd, encoded.col(t), h);
    h = cache.fwd[t].h;
    cache.states.col(t).head(H) = h;
  }
  h = VectorXd::Zero(H);
  for (int t = T - 1; t >= 0; --t) {
    cache.bwd[t] = gru_step(p.bwd, encoded.col(t), h);
    h = cache.bwd[t].h;
    cache.states.col(t).segment(H, H) = h;
  }
}

void run_output(const TaggerModel& model, const std::vector<int>& prev_labels,
                ForwardCache& cache) {
  const auto& c = model.config();
  const auto& p = model.params();
  const int T = static_cast<int>(cache.states.cols());
  if (static_cast<int>(prev_labels.size()) != T) {
    throw Error("tagger: " + std::to_string(prev_labels.size()) + " previous labels for " +
                std::to_string(T) + " steps");
  }
  cache.prev_labels = prev_labels;
  for (int t = 0; t < T; ++t) {
    const int prev = prev_labels[t];
    if (prev < 0 || prev > model.start_label()) {
      throw Error("tagger: previous label id " + std::to_string(prev) + " out of range");
    }
    cache.states.col(t).tail(c.label_dim) = p.label_emb.col(prev);
  }
  Matrix logits = p.out_w * cache.states;
  logits.colwise() += p.out_b.col(0);
  cache.logp.resize(logits.rows(), T);
  for (int t = 0; t < T; ++t) cache.logp.col(t) = detail::log_softmax(logits.col(t));
}

void check_gold(const TaggerModel& model, const Rows& rows, const std::vector<int>& gold) {
  if (rows.empty()) throw Error("tagger: empty sentence");
  if (gold.size() != rows.size()) {
    throw Error("tagger: " + std::to_string(gold.size()) + " tags for " +
                std::to_string(rows.size()) + " tokens");
  }
  for (int g : gold) {
    if (g < 0 || g >= model.output_size()) {
      throw Error("tagger: tag id " + std::to_string(g) + " out of range");
    }
  }
}

// Accumulates scale * d/dparams of the summed per-step loss whose gradient
// with respect to the step-t logits is dlogits.col(t).
void backward(const TaggerModel& model, const Rows& rows, const ForwardCache& cache,
              const Matrix& dlogits, Gradients& g) {
  const auto& c = model.config();
  const auto& p = model.params();
  const int T = cache.length;
  const int H = c.gru_hidden;

  g.out_w += dlogits * cache.states.transpose();
  g.out_b.col(0) += dlogits.rowwise().sum();
  const Matrix dstates = p.out_w.transpose() * dlogits;
  for (int t = 0; t < T; ++t) {
    g.label_emb.col(cache.prev_labels[t]) += dstates.col(t).tail(c.label_dim);
  }

  Matrix dencoded = Matrix::Zero(cache.encoded.rows(), T);
  auto gru_back = [&](const GruParams& gp, GruParams& gg, const std::vector<GruStep>& steps,
                      int offset, bool forward_dir) {
    VectorXd carry = VectorXd::Zero(H);
    for (int i = 0; i < T; ++i) {
      const int t = forward_dir ? T - 1 - i : i;
      const GruStep& s = steps[t];
      const auto x = cache.encoded.col(t);
      VectorXd dh = dstates.col(t).segment(offset, H) + carry;
      VectorXd dn = dh.cwiseProduct((1.0 - s.z.array()).matrix());
      VectorXd dz = dh.cwiseProduct(s.h_prev - s.n);
      VectorXd dh_prev = dh.cwiseProduct(s.z);

      VectorXd da_n = dn.array() * (1.0 - s.n.array().square());
      const VectorXd rh = s.r.cwiseProduct(s.h_prev);
      gg.wh += da_n * x.transpose();
      gg.uh += da_n * rh.transpose();
      gg.bh.col(0) += da_n;
      dencoded.col(t) += gp.wh.transpose() * da_n;
      const VectorXd drh = gp.uh.transpose() * da_n;
      const VectorXd dr = drh.cwiseProduct(s.h_prev);
      dh_prev += drh.cwiseProduct(s.r);

      VectorXd da_z = dz.array() * s.z.array() * (1.0 - s.z.array());
      gg.wz += da_z * x.transpose();
      gg.uz += da_z * s.h_prev.transpose();
      gg.bz.col(0) += da_z;
      dencoded.col(t) += gp.wz.transpose() * da_z;
      dh_prev += gp.uz.transpose() * da_z;

      VectorXd da_r = dr.array() * s.r.array() * (1.0 - s.r.array());
      gg.wr += da_r * x.transpose();
      gg.ur += da_r * s.h_prev.transpose();
      gg.br.col(0) += da_r;
      dencoded.col(t) += gp.wr.transpose() * da_r;
      dh_prev += gp.ur.transpose() * da_r;

      carry = dh_prev;
    }
  };
  gru_back(p.fwd, g.fwd, cache.fwd, 0, true);
  gru_back(p.bwd, g.bwd, cache.bwd, H, false);

  Matrix dx = std::move(dencoded);
  const int K = c.encoder_filter_size;
  const int left = (K - 1) / 2;
  for (int l = c.conv_layers - 1; l >= 0; --l) {
    if (l + 1 < c.conv_layers && !cache.between_mask.empty()) {
      dx = dx.cwiseProduct(cache.between_mask[l]);
    }
    const Matrix dpre = dx.cwiseProduct((cache.pre[l].array() > 0.0).cast<double>().matrix());
    g.conv_w[l] += dpre * cache.windows[l].transpose();
    g.conv_b[l].col(0) += dpre.rowwise().sum();
    const Matrix dwin = p.conv_w[l].transpose() * dpre;
    const Eigen::Index in = dwin.rows() / K;
    Matrix dprev = Matrix::Zero(in, T);
    for (int t = 0; t < T; ++t) {
      for (int k = 0; k < K; ++k) {
        const int src = t + k - left;
        if (src >= 0 && src < T) dprev.col(src) += dwin.col(t).segment(k * in, in);
      }
    }
    dx = std::move(dprev);
  }
  if (cache.input_mask.size() > 0) dx = dx.cwiseProduct(cache.input_mask);

  for (int t = 0; t < T; ++t) {
    const auto& row = rows[t];
    int word = row.word_id;
    if (word < 0 || word >= p.word_emb.cols()) word = features::Vocab::kUnk;
    int off = 0;
    g.word_emb.col(word) += dx.col(t).segment(off, c.word_dim);
    off += c.word_dim;
    g.shape_emb.col(static_cast<int>(row.shape)) += dx.col(t).segment(off, c.shape_dim);
    off += c.shape_dim;
    g.position_emb.col(detail::position_index(c, row.position)) +=
        dx.col(t).segment(off, c.position_dim);
    off += c.position_dim;
    if (c.use_chars && !row.char_ids.empty()) {
      const VectorXd share =
          dx.col(t).segment(off, c.char_dim) / static_cast<double>(row.char_ids.size());
      for (int ch : row.char_ids) {
        if (ch < 0 || ch >= p.char_emb.cols()) ch = features::Vocab::kUnk;
        g.char_emb.col(ch) += share;
      }
    }
  }
}

}  // namespace

namespace detail {

ForwardCache forward(const TaggerModel& model, const Rows& rows,
                     const std::vector<int>& prev_labels, std::mt19937_64* dropout_rng) {
  ForwardCache cache;
  run_encoder(model, rows, dropout_rng, cache);
  run_recurrence(model, cache.encoded, cache);
  run_output(model, prev_labels, cache);
  return cache;
}

StepTables step_tables(const TaggerModel& model, const Rows& rows) {
  if (rows.empty()) throw Error("tagger: empty sentence");
  const auto& c = model.config();
  const auto& p = model.params();
  ForwardCache cache;
  run_encoder(model, rows, nullptr, cache);
  run_recurrence(model, cache.encoded, cache);
  const int H2 = 2 * c.gru_hidden;
  StepTables tables;
  tables.base = p.out_w.leftCols(H2) * cache.states.topRows(H2);
  tables.base.colwise() += p.out_b.col(0);
  tables.label_part = p.out_w.rightCols(c.label_dim) * p.label_emb;
  return tables;
}

}  // namespace detail

Matrix encode_cnn(const TaggerModel& model, const Rows& rows, bool train_mode,
                  std::mt19937_64* rng) {
  if (rows.empty()) throw Error("tagger: empty sentence");
  std::mt19937_64 fallback(model.config().rng_seed);
  std::mt19937_64* use = nullptr;
  if (train_mode) use = rng ? rng : &fallback;
  detail::ForwardCache cache;
  run_encoder(model, rows, use, cache);
  return cache.encoded;
}

Matrix decode_scores(const TaggerModel& model, const Matrix& encoded,
                     const std::vector<int>& prev_label_ids) {
  detail::ForwardCache cache;
  cache.encoded = encoded;
  cache.length = static_cast<int>(encoded.cols());
  run_recurrence(model, encoded, cache);
  run_output(model, prev_label_ids, cache);
  return cache.logp.transpose();
}

std::vector<int> shifted_labels(const TaggerModel& model, const std::vector<int>& tags) {
  std::vector<int> prev;
  prev.reserve(tags.size());
  if (tags.empty()) return prev;
  prev.push_back(model.start_label());
  prev.insert(prev.end(), tags.begin(), tags.end() - 1);
  return prev;
}

double loss(const TaggerModel& model, const Rows& rows, const std::vector<int>& gold) {
  check_gold(model, rows, gold);
  auto cache = detail::forward(model, rows, shifted_labels(model, gold), nullptr);
  double total = 0.0;
  for (int t = 0; t < cache.length; ++t) total -= cache.logp(gold[t], t);
  return total;
}

double accumulate_gradients(const TaggerModel& model, const Rows& rows,
                            const std::vector<int>& gold, Gradients& grads, double scale,
                            std::mt19937_64* dropout_rng) {
  check_gold(model, rows, gold);
  auto cache = detail::forward(model, rows, shifted_labels(model, gold), dropout_rng);
  double total = 0.0;
  Matrix dlogits = cache.logp.array().exp();
  for (int t = 0; t < cache.length; ++t) {
    total -= cache.logp(gold[t], t);
    dlogits(gold[t], t) -= 1.0;
  }
  dlogits *= scale;
  backward(model, rows, cache, dlogits, grads);
  return total;
}

Gradients grad(const TaggerModel& model, const Rows& rows, const std::vector<int>& gold) {
  Gradients g = model.params().zeros_like();
  accumulate_gradients(model, rows, gold, g);
  return g;
}

}  // namespace ddix::tagger
