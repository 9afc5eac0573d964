#include "ssma/policy.hpp"

#include "ssma/math.hpp"

namespace ssma {

Vector action_distribution(const Matrix& weights, const Vector& features,
                           Real temperature) {
  if (!(temperature > 0)) throw ContractError("temperature must be positive");
  if (!features.allFinite()) throw NumericError("non-finite features");
  const Vector logits = (weights * features) / temperature;
  if (!logits.allFinite()) throw NumericError("non-finite policy logits");
  return softmax(logits);
}

Vector log_prob_all(const Matrix& weights, const Vector& features) {
  const Vector logits = weights * features;
  if (!logits.allFinite()) throw NumericError("non-finite policy logits");
  return log_softmax(logits);
}

Real log_prob(const Matrix& weights, const Vector& features, int action) {
  return log_prob_all(weights, features)(action);
}

Matrix grad_log_prob(const PolicyParams& policy, const Vector& features,
                     int action) {
  if (action < 0 || action >= policy.action_count()) {
    throw ContractError("action index out of range");
  }
  const Vector probs = action_distribution(policy.weights, features, 1.0);
  Matrix grad = -probs * features.transpose();
  grad.row(action) += features.transpose();
  return grad;
}

SampledAction sample_action(const Matrix& weights, const Vector& features,
                            Real temperature, RandomStream& rng) {
  const Vector probs = action_distribution(weights, features, temperature);
  const int action = rng.categorical(probs);
  return SampledAction{action, log_prob(weights, features, action)};
}

void take_snapshot(PolicyParams& policy) {
  policy.snapshot_weights = policy.weights;
}

}  // namespace ssma
