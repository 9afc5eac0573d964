#pragma once

#include <cstdint>

#include "ssma/types.hpp"

namespace ssma {

/// Per-action linear Q head over shared features: Q(s, a) = weights[a] . x.
struct CriticParams {
  Matrix weights;  // A x d
  Real value_clip = 0.5;  // epsilon_v
  std::uint64_t version = 0;

  int action_count() const { return static_cast<int>(weights.rows()); }
  int feature_dim() const { return static_cast<int>(weights.cols()); }
  bool finite() const { return weights.allFinite(); }
};

inline CriticParams make_critic(int actions, int dim, Real value_clip = 0.5) {
  if (!(value_clip > 0)) throw ConfigError("value_clip must be positive");
  return CriticParams{Matrix::Zero(actions, dim), value_clip, 0};
}

Real q_value(const CriticParams& critic, const Vector& features, int action);

struct CriticLossGrad {
  Real loss = 0.0;
  Matrix grad;  // A x d
};

/// Clipped value regression loss:
///   loss = 1/2 max((Q - R)^2, (clip(Q, Q_old +- eps_v) - R)^2)
/// The gradient follows the branch attaining the max; ties resolve to the
/// unclipped branch. When the clipped branch wins and Q lies strictly
/// outside the clip interval the gradient is exactly zero.
CriticLossGrad critic_loss_and_grad(const CriticParams& critic,
                                    const Vector& features, int action,
                                    Real target, Real q_old);

}  // namespace ssma
