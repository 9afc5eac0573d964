#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ssma/advantage.hpp"
#include "ssma/critic.hpp"
#include "ssma/features.hpp"
#include "ssma/metrics.hpp"
#include "ssma/optimizer.hpp"
#include "ssma/policy.hpp"
#include "ssma/rewards.hpp"
#include "ssma/rollout.hpp"
#include "ssma/screen_graph.hpp"
#include "ssma/sim_clock.hpp"

namespace ssma {

enum class Method { android_coach, ppo, grpo };
enum class CriticInit { none, online_warmup, prm_pretrain };

const char* method_name(Method method);
Method method_from_name(const std::string& name);
const char* critic_init_name(CriticInit mode);
CriticInit critic_init_from_name(const std::string& name);

struct TrainConfig {
  Method method = Method::android_coach;
  int batch_size = 8;
  int k = 4;  // SSMA resample count; k = 1 degrades to the no-baseline estimator
  int grpo_group_size = 4;
  Real clip_ratio = 0.2;
  Real value_clip = 0.5;
  RewardWeights reward;
  Real actor_lr = 0.05;
  Real critic_lr = 0.1;
  Real grad_clip_norm = 1.0;
  OptimizerMode optimizer = OptimizerMode::sgd;
  CriticInit critic_init = CriticInit::prm_pretrain;
  int critic_epochs = 1;
  int actor_epochs = 1;
  int warmup_iterations = 5;
  Real temperature = 1.0;
  std::int64_t max_iterations = 400;
  Real time_budget = 0.0;  // simulated seconds; 0 disables the budget stop
  bool include_executed = false;
  bool normalize_advantages = false;
  bool charge_resample_inference = true;
  bool ppo_use_prm = false;
  bool grpo_sample_std = false;
  Real grpo_std_floor = 1e-4;
  int prm_samples_per_state = 8;
  PrmTrainOptions prm_train{2, 32, 8.0, 1.0, 0.2, 0};
  PrmTrainOptions critic_pretrain{4, 32, 4.0, 1.0, 0.0, 0};
  int eval_every = 1;
  int eval_episodes_per_task = 1;
  Real target_success_rate = 0.8;

  void validate() const;
};

/// One PPO-clip objective term: min(ratio * A, clip(ratio, 1 +- eps) * A).
Real ppo_clip_objective(Real ratio, Real advantage, Real epsilon);

struct ActorRecord {
  Vector features;
  int action = 0;
  Real advantage = 0.0;
  Real old_logprob = 0.0;
};

/// One clipped-surrogate gradient step per epoch over the records.
/// Returns the mean loss (negated objective) of the first epoch.
Real actor_update(PolicyParams& policy, std::span<const ActorRecord> records,
                  Real clip_ratio, int epochs, OptimizerState& opt);

/// Greedy success rate of a policy over a pool (argmax action, ties to
/// the lowest index). Uses a scratch clock.
Real evaluate_policy(const Matrix& weights, const TaskPool& pool,
                     const FeatureMap& features, const LatencyModel& latency,
                     int episodes_per_task);

/// Orchestrates one training method against the MiniGUI pools under a
/// shared simulated clock. All randomness derives from (run_seed,
/// iteration), so runs are reproducible and worker-count independent.
class Trainer {
 public:
  Trainer(TrainConfig config, TaskPool train_pool, TaskPool eval_pool,
          LatencyModel latency, std::uint64_t run_seed, int worker_count = 1);

  /// PRM dataset/classifier construction and critic initialization.
  /// Called lazily by run_iteration; offline preparation is not charged
  /// to the online training clock (only online_warmup rollouts are).
  void initialize();

  TrainerMetricsRow run_iteration();

  /// Runs until the iteration budget, or the simulated-time budget if
  /// positive. Returns all metric rows.
  std::vector<TrainerMetricsRow> run();

  /// Greedy-evaluation success rate over the eval pool (no clock charge).
  Real evaluate() const;

  const TrainConfig& config() const { return config_; }
  const SimClock& clock() const { return clock_; }
  const PolicyParams& policy() const { return policy_; }
  const CriticParams& critic() const { return critic_; }
  const PrmParams& prm() const { return prm_; }
  const Vector& state_value() const { return value_; }
  const FeatureMap& features() const { return features_; }
  const TaskPool& train_pool() const { return train_pool_; }
  const TaskPool& eval_pool() const { return eval_pool_; }
  const OptimizerState& actor_optimizer() const { return actor_opt_; }
  const OptimizerState& critic_optimizer() const { return critic_opt_; }
  std::int64_t iteration() const { return iteration_; }
  Real prm_holdout_accuracy() const { return prm_holdout_accuracy_; }
  const std::vector<TrainerMetricsRow>& history() const { return history_; }
  const std::vector<Trajectory>& last_trajectories() const {
    return last_trajectories_;
  }

 private:
  TrainerMetricsRow run_iteration_android_coach();
  TrainerMetricsRow run_iteration_ppo();
  TrainerMetricsRow run_iteration_grpo();

  std::vector<TaskSpec> next_batch(int count);
  std::vector<Trajectory> rollout(std::span<const TaskSpec> batch);
  void assign_rewards_and_returns(std::span<const TaskSpec> batch,
                                  std::vector<Trajectory>& trajectories,
                                  const RewardWeights& weights, bool score_prm);
  Real update_critic(std::span<const TaskSpec> batch,
                     std::span<const Trajectory> trajectories);
  TrainerMetricsRow finish_row(std::span<const Trajectory> trajectories,
                               Real critic_loss, Real actor_loss);
  bool prm_scoring_enabled() const;

  TrainConfig config_;
  TaskPool train_pool_;
  TaskPool eval_pool_;
  LatencyModel latency_;
  std::uint64_t run_seed_ = 0;
  int worker_count_ = 1;

  FeatureMap features_;
  PolicyParams policy_;
  CriticParams critic_;
  PrmParams prm_;
  Vector value_;  // PPO linear state-value baseline
  OptimizerState actor_opt_;
  OptimizerState critic_opt_;
  OptimizerState value_opt_;
  SimClock clock_;
  std::int64_t iteration_ = 0;
  std::int64_t batch_cursor_ = 0;
  bool initialized_ = false;
  Real prm_holdout_accuracy_ = 0.0;
  Real last_eval_ = 0.0;
  std::vector<TrainerMetricsRow> history_;
  std::vector<Trajectory> last_trajectories_;
};

struct MethodRunResult {
  Method method = Method::android_coach;
  std::uint64_t seed = 0;
  std::vector<TrainerMetricsRow> rows;
  std::optional<Real> time_to_target;  // simulated seconds; empty = censored
  Real final_eval_sr = 0.0;
};

struct MethodSummary {
  Method method = Method::android_coach;
  std::vector<MethodRunResult> runs;
  Real median_time_to_target = 0.0;  // censored runs count as the budget
  int censored = 0;
};

struct CompareReport {
  Real target_sr = 0.8;
  Real time_budget = 0.0;
  std::vector<MethodSummary> methods;

  const MethodSummary& summary(Method method) const;
  /// median time of `baseline` / median time of `method`.
  Real efficiency_ratio(Method baseline, Method method) const;
};

/// Runs every config for every seed against shared pools and a shared
/// latency model, to the shared simulated-time budget.
CompareReport compare_methods(std::span<const TrainConfig> configs,
                              const TaskPool& train_pool, const TaskPool& eval_pool,
                              const LatencyModel& latency, Real time_budget,
                              std::span<const std::uint64_t> seeds,
                              int worker_count);

}  // namespace ssma
