#include "ssma/advantage.hpp"

#include <cmath>

namespace ssma {

const char* estimator_name(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::acloo: return "acloo";
    case EstimatorKind::no_baseline: return "no_baseline";
    case EstimatorKind::rloo: return "rloo";
    case EstimatorKind::grpo: return "grpo";
    case EstimatorKind::mc_value: return "mc_value";
  }
  throw ContractError("unknown estimator kind");
}

EstimatorKind estimator_from_name(const std::string& name) {
  if (name == "acloo") return EstimatorKind::acloo;
  if (name == "no_baseline") return EstimatorKind::no_baseline;
  if (name == "rloo") return EstimatorKind::rloo;
  if (name == "grpo") return EstimatorKind::grpo;
  if (name == "mc_value") return EstimatorKind::mc_value;
  throw ConfigError("unknown estimator tag: " + name);
}

void QGroup::validate() const {
  const int k = size();
  if (k < 2) throw ContractError("QGroup needs k >= 2");
  if (q_values.size() != k || old_logprobs.size() != k) {
    throw ContractError("QGroup list lengths differ");
  }
  if (!q_values.allFinite()) throw NumericError("non-finite Q values");
}

Vector acloo_advantages(const Vector& q_values) {
  const int k = static_cast<int>(q_values.size());
  if (k < 2) throw ContractError("leave-one-out needs a group of k >= 2");
  // Center first: algebraically a no-op, numerically it keeps the
  // estimate shift-invariant when the values carry a large common offset.
  const Vector centered = q_values.array() - q_values.mean();
  const Real sum = centered.sum();
  const Real scale = 1.0 / static_cast<Real>(k - 1);
  return centered.array() - (sum - centered.array()) * scale;
}

std::vector<AdvantageRecord> acloo(const QGroup& group) {
  group.validate();
  const Vector advantages = acloo_advantages(group.q_values);
  std::vector<AdvantageRecord> out(group.size());
  for (int i = 0; i < group.size(); ++i) {
    out[i] = AdvantageRecord{group.actions[i], advantages(i),
                             group.old_logprobs(i), EstimatorKind::acloo};
  }
  return out;
}

Vector grpo_normalize(const Vector& rewards, Real std_floor, bool sample_std) {
  const int g = static_cast<int>(rewards.size());
  if (g < 2) throw ContractError("group normalization needs G >= 2");
  if (!(std_floor >= 0)) throw ConfigError("std floor must be >= 0");
  const Real mean = rewards.mean();
  const Vector centered = rewards.array() - mean;
  const Real denom = static_cast<Real>(sample_std ? g - 1 : g);
  const Real stddev = std::sqrt(centered.squaredNorm() / denom);
  if (stddev + std_floor <= 0) return centered;  // all equal, floor zero
  return centered / (stddev + std_floor);
}

Vector rloo_rewards(const Vector& rewards) { return acloo_advantages(rewards); }

Vector mc_value_advantage(const Vector& returns, const Vector& values) {
  if (returns.size() != values.size()) {
    throw ContractError("returns/values length mismatch");
  }
  return returns - values;
}

}  // namespace ssma
