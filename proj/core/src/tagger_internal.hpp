#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "ddix/tagger.hpp"

namespace ddix::tagger::detail {

// Portable uniform draws: raw engine output only, no distribution objects,
// so traces match across standard libraries.
class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : engine_(seed) {}
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

inline double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct GruStep {
  Eigen::VectorXd h_prev, z, r, n, h;
};

// Everything the backward pass needs from one forward pass.
struct ForwardCache {
  int length = 0;
  Matrix input;                      // embeddings after dropout, input_dim x T
  Matrix input_mask;                 // empty when no dropout
  std::vector<Matrix> windows;       // per conv layer: (filter*in) x T
  std::vector<Matrix> pre;           // per conv layer: out x T
  std::vector<Matrix> between_mask;  // dropout masks after layers 0..L-2
  Matrix encoded;                    // final ReLU output
  std::vector<GruStep> fwd, bwd;
  Matrix states;                     // (2H + label_dim) x T, output-layer inputs
  Matrix logp;                       // output x T
  std::vector<int> prev_labels;
};

ForwardCache forward(const TaggerModel& model, const Rows& rows,
                     const std::vector<int>& prev_labels, std::mt19937_64* dropout_rng);

// Input embedding matrix (input_dim x T) before dropout.
Matrix embed(const TaggerModel& model, const Rows& rows);

int position_index(const TaggerConfig& config, int bucket);

// Base logits W_state [f; b] + bias per step (output x T) and the
// label-embedding contribution per previous label (output x (output + 1)).
struct StepTables {
  Matrix base;
  Matrix label_part;
};
StepTables step_tables(const TaggerModel& model, const Rows& rows);

// Log-softmax of a column vector.
Eigen::VectorXd log_softmax(const Eigen::VectorXd& logits);

}  // namespace ddix::tagger::detail
