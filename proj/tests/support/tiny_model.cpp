#include "tiny_model.hpp"

namespace ddix::testing {

tagger::TaggerConfig tiny_config(std::uint64_t seed) {
  tagger::TaggerConfig c;
  c.word_dim = 4;
  c.shape_dim = 2;
  c.position_dim = 3;
  c.char_dim = 3;
  c.label_dim = 3;
  c.encoder_output_size = 5;
  c.gru_hidden = 4;
  c.encoder_filter_size = 3;
  c.conv_layers = 3;
  c.position_buckets = 6;
  c.dropout_rate = 0.0;
  c.batch_size = 4;
  c.rng_seed = seed;
  return c;
}

tagger::Rows random_rows(std::mt19937_64& rng, int length, int word_vocab, int char_vocab,
                         int position_buckets) {
  std::uniform_int_distribution<int> word(0, word_vocab - 1), chr(1, char_vocab - 1),
      shape(0, features::kShapeClassCount - 1), pos(0, position_buckets + 2),
      nchars(1, 4);
  tagger::Rows rows(length);
  for (auto& r : rows) {
    r.word_id = word(rng);
    r.shape = static_cast<features::ShapeClass>(shape(rng));
    const int p = pos(rng);
    r.position = p > position_buckets + 1 ? features::kAbsentAnchor : p;
    const int n = nchars(rng);
    for (int i = 0; i < n; ++i) r.char_ids.push_back(chr(rng));
  }
  return rows;
}

void scramble(tagger::TaggerModel& model, std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  for (auto& [name, m] : model.params().tensors()) {
    for (Eigen::Index i = 0; i < m->size(); ++i) m->data()[i] = u(rng);
  }
}

double forced_score(const tagger::TaggerModel& model, const tagger::Rows& rows,
                    const std::vector<int>& tags) {
  const auto encoded = tagger::encode_cnn(model, rows, false);
  std::vector<int> prev{model.start_label()};
  for (std::size_t t = 0; t + 1 < tags.size(); ++t) prev.push_back(tags[t]);
  const auto scores = tagger::decode_scores(model, encoded, prev);
  double s = 0.0;
  for (std::size_t t = 0; t < tags.size(); ++t) s += scores(static_cast<Eigen::Index>(t), tags[t]);
  return s;
}

Exhaustive exhaustive_best(const tagger::TaggerModel& model, const tagger::Rows& rows,
                           int labels) {
  const int T = static_cast<int>(rows.size());
  Exhaustive out;
  std::vector<int> seq(T, 0);
  while (true) {
    const double s = forced_score(model, rows, seq);
    if (out.sequences == 0 || s > out.best_score) {
      out.best = seq;
      out.best_score = s;
    }
    ++out.sequences;
    int k = T - 1;
    while (k >= 0 && ++seq[k] == labels) seq[k--] = 0;
    if (k < 0) break;
  }
  return out;
}

std::vector<int> greedy(const tagger::TaggerModel& model, const tagger::Rows& rows, int labels) {
  std::vector<int> tags;
  for (std::size_t t = 0; t < rows.size(); ++t) {
    int best = 0;
    double best_score = 0.0;
    for (int y = 0; y < labels; ++y) {
      auto trial = tags;
      trial.push_back(y);
      trial.resize(rows.size(), 0);
      const auto encoded = tagger::encode_cnn(model, rows, false);
      std::vector<int> prev{model.start_label()};
      for (std::size_t k = 0; k + 1 < trial.size(); ++k) prev.push_back(trial[k]);
      const double s = tagger::decode_scores(model, encoded, prev)(static_cast<Eigen::Index>(t), y);
      if (y == 0 || s > best_score) {
        best = y;
        best_score = s;
      }
    }
    tags.push_back(best);
  }
  return tags;
}

}  // namespace ddix::testing

namespace ddix::testing {

std::vector<BlockCheck> gradient_check(tagger::TaggerModel model, const tagger::Rows& rows,
                                       const std::vector<int>& gold, double h) {
  const auto analytic = tagger::grad(model, rows, gold);
  const auto a_blocks = analytic.tensors();
  auto p_blocks = model.params().tensors();
  std::vector<BlockCheck> out;
  for (std::size_t b = 0; b < p_blocks.size(); ++b) {
    Matrix& w = *p_blocks[b].second;
    const Matrix& a = *a_blocks[b].second;
    Matrix numeric(w.rows(), w.cols());
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      const double saved = w.data()[i];
      w.data()[i] = saved + h;
      const double up = tagger::loss(model, rows, gold);
      w.data()[i] = saved - h;
      const double down = tagger::loss(model, rows, gold);
      w.data()[i] = saved;
      numeric.data()[i] = (up - down) / (2 * h);
    }
    BlockCheck c;
    c.name = p_blocks[b].first;
    const double scale = std::max(a.norm(), numeric.norm());
    c.norm_rel = scale == 0.0 ? 0.0 : (a - numeric).norm() / scale;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      const double x = a.data()[i], y = numeric.data()[i];
      c.max_abs_diff = std::max(c.max_abs_diff, std::abs(x - y));
      const double m = std::max(std::abs(x), std::abs(y));
      if (m > 1e-7) c.max_entry_rel = std::max(c.max_entry_rel, std::abs(x - y) / m);
    }
    out.push_back(c);
  }
  return out;
}

}  // namespace ddix::testing
