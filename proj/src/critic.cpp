#include "ssma/critic.hpp"

#include <algorithm>
#include <cmath>

namespace ssma {

Real q_value(const CriticParams& critic, const Vector& features, int action) {
  if (action < 0 || action >= critic.action_count()) {
    throw ContractError("action index out of range");
  }
  return critic.weights.row(action).dot(features);
}

CriticLossGrad critic_loss_and_grad(const CriticParams& critic,
                                    const Vector& features, int action,
                                    Real target, Real q_old) {
  if (!std::isfinite(target) || !std::isfinite(q_old)) {
    throw NumericError("non-finite critic target or snapshot prediction");
  }
  const Real q = q_value(critic, features, action);
  const Real lo = q_old - critic.value_clip;
  const Real hi = q_old + critic.value_clip;
  const Real q_clipped = std::clamp(q, lo, hi);
  const Real err_unclipped = q - target;
  const Real err_clipped = q_clipped - target;
  const Real sq_unclipped = err_unclipped * err_unclipped;
  const Real sq_clipped = err_clipped * err_clipped;

  CriticLossGrad out;
  out.grad = Matrix::Zero(critic.action_count(), critic.feature_dim());
  if (sq_unclipped >= sq_clipped) {
    out.loss = 0.5 * sq_unclipped;
    out.grad.row(action) = err_unclipped * features.transpose();
  } else {
    out.loss = 0.5 * sq_clipped;
    // Clipped branch strictly larger implies q != q_clipped, i.e. Q sits
    // outside the clip interval, so the clip gate kills the gradient.
  }
  return out;
}

}  // namespace ssma
