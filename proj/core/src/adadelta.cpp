#include <cmath>

#include "ddix/tagger.hpp"

namespace ddix::tagger {

AdadeltaState AdadeltaState::for_model(const TaggerModel& model) {
  return {model.params().zeros_like(), model.params().zeros_like()};
}

void adadelta_step(AdadeltaState& state, TaggerModel& model, const Gradients& grads, double rho,
                   double epsilon) {
  auto params = model.params().tensors();
  auto g = grads.tensors();
  auto eg = state.sq_grad.tensors();
  auto ex = state.sq_update.tensors();
  if (g.size() != params.size() || eg.size() != params.size() || ex.size() != params.size()) {
    throw Error("adadelta: gradient tree does not match the model");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    Matrix& w = *params[i].second;
    const Matrix& gi = *g[i].second;
    Matrix& egi = *eg[i].second;
    Matrix& exi = *ex[i].second;
    if (gi.rows() != w.rows() || gi.cols() != w.cols() || egi.rows() != w.rows() ||
        egi.cols() != w.cols()) {
      throw Error("adadelta: shape mismatch in " + params[i].first);
    }
    egi = rho * egi.array() + (1.0 - rho) * gi.array().square();
    const Matrix update = -((exi.array() + epsilon).sqrt() / (egi.array() + epsilon).sqrt() *
                            gi.array())
                               .matrix();
    exi = rho * exi.array() + (1.0 - rho) * update.array().square();
    w += update;
  }
}

}  // namespace ddix::tagger
