#pragma once

#include <cstdint>
#include <optional>

#include "ssma/rng.hpp"
#include "ssma/types.hpp"

namespace ssma {

/// Softmax policy over shared features: logits = weights * x. The
/// snapshot holds the frozen pre-update weights used for importance
/// ratios.
struct PolicyParams {
  Matrix weights;  // A x d
  std::optional<Matrix> snapshot_weights;
  std::uint64_t version = 0;

  int action_count() const { return static_cast<int>(weights.rows()); }
  int feature_dim() const { return static_cast<int>(weights.cols()); }
  bool finite() const { return weights.allFinite(); }
};

inline PolicyParams make_policy(int actions, int dim) {
  return PolicyParams{Matrix::Zero(actions, dim), std::nullopt, 0};
}

/// Softmax of (weights * x) / temperature.
Vector action_distribution(const Matrix& weights, const Vector& features,
                           Real temperature);

inline Vector action_distribution(const PolicyParams& policy,
                                  const Vector& features, Real temperature) {
  return action_distribution(policy.weights, features, temperature);
}

/// Log probabilities at temperature 1.
Vector log_prob_all(const Matrix& weights, const Vector& features);
Real log_prob(const Matrix& weights, const Vector& features, int action);

/// Gradient of log pi(action | x) w.r.t. the weight matrix, temperature 1:
/// row `action` gets (1 - pi_action) x^T, every other row b gets -pi_b x^T.
Matrix grad_log_prob(const PolicyParams& policy, const Vector& features,
                     int action);

struct SampledAction {
  int action = 0;
  Real logprob = 0.0;
};

/// Draws one action from the softmax distribution at `temperature` and
/// records its log-probability under the same weights at temperature 1.
SampledAction sample_action(const Matrix& weights, const Vector& features,
                            Real temperature, RandomStream& rng);

/// Stores a deep copy of the current weights as the snapshot.
void take_snapshot(PolicyParams& policy);

}  // namespace ssma
