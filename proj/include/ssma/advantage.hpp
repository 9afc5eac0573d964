#pragma once

#include <string>
#include <vector>

#include "ssma/types.hpp"

namespace ssma {

enum class EstimatorKind { acloo, no_baseline, rloo, grpo, mc_value };

const char* estimator_name(EstimatorKind kind);
EstimatorKind estimator_from_name(const std::string& name);

/// k actions resampled i.i.d. for one state, with their critic values and
/// snapshot log-probs. The SSMA training sample.
struct QGroup {
  Vector features;
  std::vector<int> actions;
  Vector q_values;
  Vector old_logprobs;

  int size() const { return static_cast<int>(actions.size()); }
  void validate() const;
};

struct AdvantageRecord {
  int action = 0;
  Real advantage = 0.0;
  Real old_logprob = 0.0;
  EstimatorKind estimator = EstimatorKind::acloo;
};

/// Leave-one-out advantages over critic values:
///   A_i = Q_i - mean_{j != i} Q_j.
/// Values are centered before the leave-one-out algebra so the estimate
/// stays shift-invariant at large common offsets.
Vector acloo_advantages(const Vector& q_values);
std::vector<AdvantageRecord> acloo(const QGroup& group);

/// Group normalization (r - mean) / (std + floor); population std by
/// default, Bessel-corrected when sample_std is set.
Vector grpo_normalize(const Vector& rewards, Real std_floor,
                      bool sample_std = false);

/// Reward-based leave-one-out: same algebra as acloo applied to rewards.
Vector rloo_rewards(const Vector& rewards);

/// Elementwise R_t - V(s_t).
Vector mc_value_advantage(const Vector& returns, const Vector& values);

}  // namespace ssma
