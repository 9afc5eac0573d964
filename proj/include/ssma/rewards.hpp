#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ssma/critic.hpp"
#include "ssma/env.hpp"
#include "ssma/features.hpp"
#include "ssma/optimizer.hpp"
#include "ssma/policy.hpp"
#include "ssma/screen_graph.hpp"
#include "ssma/types.hpp"

namespace ssma {

enum class DiscountMode { as_written, standard };

struct RewardWeights {
  Real omega_p = 0.2;
  Real omega_o = 1.0;
  Real gamma = 0.95;
  Real prm_threshold = 0.5;
  Real prm_noise_rate = 0.05;
  DiscountMode discount_mode = DiscountMode::as_written;

  void validate() const {
    if (omega_p < 0 || omega_o < 0 || omega_p + omega_o <= 0) {
      throw ConfigError("reward weights must be non-negative, not both zero");
    }
    if (!(gamma > 0 && gamma <= 1)) throw ConfigError("gamma must be in (0, 1]");
    if (!(prm_threshold > 0 && prm_threshold < 1)) {
      throw ConfigError("prm_threshold must be in (0, 1)");
    }
    if (!(prm_noise_rate >= 0 && prm_noise_rate < 0.5)) {
      throw ConfigError("prm_noise_rate must be in [0, 0.5)");
    }
  }
};

struct StepLabelRecord {
  std::int64_t task_id = 0;
  int screen = 0;
  int action = 0;
  int label = 0;  // 1 iff action matches the per-screen optimal action
  Vector features;
};

/// Per-action logistic step classifier: P(label=1 | x, a) = sigmoid(w_a.x + b_a).
struct PrmParams {
  Matrix weights;  // A x d
  Vector bias;     // A
  std::uint64_t version = 0;

  int action_count() const { return static_cast<int>(weights.rows()); }
  int feature_dim() const { return static_cast<int>(weights.cols()); }
};

inline PrmParams make_prm(int actions, int dim) {
  return PrmParams{Matrix::Zero(actions, dim), Vector::Zero(actions), 0};
}

Real prm_logit(const PrmParams& prm, const Vector& features, int action);
Real prm_probability(const PrmParams& prm, const Vector& features, int action);

struct PrmDataset {
  std::vector<StepLabelRecord> records;
  bool degenerate = false;  // one class collapsed during balancing
};

/// Walks each task's optimal path, samples `samples_per_state` candidate
/// actions from the policy at every visited screen, labels them against
/// the optimal action, and balances classes 1:1 by down-sampling the
/// majority class. Deterministic per seed.
PrmDataset build_prm_dataset(const TaskPool& pool, const PolicyParams& policy,
                             const FeatureMap& features, int samples_per_state,
                             std::uint64_t seed);

struct PrmTrainOptions {
  int epochs = 2;
  int batch_size = 32;
  // Desk-scale datasets are a few hundred records, so the per-cell visit
  // count within 2 epochs is small; the rate compensates.
  Real learning_rate = 8.0;
  Real grad_clip_norm = 1.0;
  Real holdout_fraction = 0.2;
  std::uint64_t seed = 0;
};

struct PrmTrainReport {
  PrmParams params;
  Real holdout_accuracy = 0.0;
  int train_records = 0;
  int holdout_records = 0;
  Real final_train_loss = 0.0;
};

/// Minimizes the per-record cross-entropy -log P(y | x, a) by mini-batch
/// gradient descent. Requires both classes in the dataset.
PrmTrainReport train_prm(const std::vector<StepLabelRecord>& dataset,
                         int action_count, int feature_dim,
                         const PrmTrainOptions& options);

/// Binary step reward: 1 iff the classifier score clears the threshold,
/// then flipped with probability prm_noise_rate. Deterministic per
/// (inputs, noise_seed).
int prm_score(const PrmParams& prm, const Vector& features, int action,
              const RewardWeights& weights, std::uint64_t noise_seed);

/// Weighted Monte-Carlo return targets for a complete trajectory with
/// process rewards and the outcome reward already assigned:
///   as-written: R_t = omega_p * sum_{tau=t..T} gamma^(T-tau) r_p^tau + omega_o r_o
///   standard:   R_t = omega_p * sum_{tau=t..T} gamma^(tau-t) r_p^tau + omega_o r_o
std::vector<Real> compute_returns(const Trajectory& trajectory,
                                  const RewardWeights& weights);

/// Warm-starts the critic by regressing Q(s, a) toward the binary labels
/// with unclipped MSE. Mini-batch SGD, deterministic per options.seed.
CriticParams pretrain_critic(CriticParams critic,
                             const std::vector<StepLabelRecord>& dataset,
                             const PrmTrainOptions& options);

std::string prm_dataset_to_jsonl(const std::vector<StepLabelRecord>& records);

}  // namespace ssma
