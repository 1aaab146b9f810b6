#include <algorithm>
#include <numeric>

#include "ddix/tagger.hpp"
#include "tagger_internal.hpp"

namespace ddix::tagger {

double mention_f1(const TaggerModel& model, const std::vector<TaggingExample>& examples,
                  int beam_size) {
  long tp = 0, gold_n = 0, pred_n = 0;
  for (const auto& ex : examples) {
    if (ex.rows.empty()) continue;
    auto gold = codec::decode_ids(ex.gold, model.scheme());
    auto pred = codec::decode_ids(beam_decode(model, ex.rows, beam_size).tags, model.scheme());
    std::vector<codec::TaggedSpan> common;
    std::set_intersection(gold.begin(), gold.end(), pred.begin(), pred.end(),
                          std::back_inserter(common));
    tp += static_cast<long>(common.size());
    gold_n += static_cast<long>(gold.size());
    pred_n += static_cast<long>(pred.size());
  }
  if (gold_n == 0 || pred_n == 0 || tp == 0) return 0.0;
  const double p = static_cast<double>(tp) / pred_n;
  const double r = static_cast<double>(tp) / gold_n;
  return 2 * p * r / (p + r);
}

TrainResult train(TaggerModel model, const std::vector<TaggingExample>& train_set,
                  const std::vector<TaggingExample>& val_set, const EpochCallback& on_epoch) {
  if (train_set.empty()) throw Error("train: empty training corpus");
  for (const auto& ex : train_set) {
    if (ex.rows.empty()) throw Error("train: empty sentence in training corpus");
  }
  const TaggerConfig& c = model.config();
  const auto& val = val_set.empty() ? train_set : val_set;

  // Separate streams so dropout draws do not shift batch order.
  std::mt19937_64 order_rng(c.rng_seed ^ 0x9e3779b97f4a7c15ULL);
  std::mt19937_64 dropout_rng(c.rng_seed + 0x632be59bd9b4e019ULL);

  TrainState state;
  state.adadelta = AdadeltaState::for_model(model);
  TrainResult result{model, {}};
  Gradients grads = model.params().zeros_like();
  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  while (state.epoch < c.max_epochs) {
    ++state.epoch;
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[order_rng() % i]);
    }
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += c.batch_size) {
      const std::size_t end = std::min(order.size(), start + c.batch_size);
      const double scale = 1.0 / static_cast<double>(end - start);
      grads.set_zero();
      // Summing per-sentence gradients equals padding to the batch maximum
      // and masking the padded steps out of the loss.
      for (std::size_t k = start; k < end; ++k) {
        const auto& ex = train_set[order[k]];
        epoch_loss += accumulate_gradients(model, ex.rows, ex.gold, grads, scale,
                                           c.dropout_rate > 0.0 ? &dropout_rng : nullptr);
      }
      adadelta_step(state.adadelta, model, grads, c.adadelta_rho, c.adadelta_epsilon);
    }
    if (!model.all_finite()) throw Error("train: parameters diverged to non-finite values");

    EpochRecord rec{state.epoch, epoch_loss / static_cast<double>(train_set.size()),
                    mention_f1(model, val, c.beam_size)};
    result.history.epochs.push_back(rec);
    if (on_epoch) on_epoch(rec);

    if (rec.val_f1 > state.best_score) {
      state.best_score = rec.val_f1;
      state.best_epoch = state.epoch;
      state.patience_used = 0;
      result.model = model;
    } else if (++state.patience_used >= c.early_stopping_patience) {
      result.history.early_stopped = true;
      break;
    }
  }
  result.history.best_epoch = state.best_epoch;
  result.history.best_val_f1 = std::max(0.0, state.best_score);
  return result;
}

}  // namespace ddix::tagger
