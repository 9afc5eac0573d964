#include "ssma/trainer.hpp"

#include <algorithm>
#include <cmath>

#include "ssma/env.hpp"
#include "ssma/math.hpp"
#include "ssma/rng.hpp"

namespace ssma {

const char* method_name(Method method) {
  switch (method) {
    case Method::android_coach: return "android_coach";
    case Method::ppo: return "ppo";
    case Method::grpo: return "grpo";
  }
  throw ContractError("unknown method");
}

Method method_from_name(const std::string& name) {
  if (name == "android_coach") return Method::android_coach;
  if (name == "ppo") return Method::ppo;
  if (name == "grpo") return Method::grpo;
  throw ConfigError("unknown method: " + name);
}

const char* critic_init_name(CriticInit mode) {
  switch (mode) {
    case CriticInit::none: return "none";
    case CriticInit::online_warmup: return "online_warmup";
    case CriticInit::prm_pretrain: return "prm_pretrain";
  }
  throw ContractError("unknown critic init mode");
}

CriticInit critic_init_from_name(const std::string& name) {
  if (name == "none") return CriticInit::none;
  if (name == "online_warmup") return CriticInit::online_warmup;
  if (name == "prm_pretrain") return CriticInit::prm_pretrain;
  throw ConfigError("unknown critic init mode: " + name);
}

void TrainConfig::validate() const {
  if (batch_size < 1) throw ConfigError("train.batch_size must be >= 1");
  if (k < 1) throw ConfigError("train.k must be >= 1");
  if (grpo_group_size < 2) throw ConfigError("train.grpo_group_size must be >= 2");
  if (!(clip_ratio > 0 && clip_ratio < 1)) {
    throw ConfigError("train.clip_ratio must be in (0, 1)");
  }
  if (!(value_clip > 0)) throw ConfigError("train.value_clip must be > 0");
  if (!(actor_lr >= 0) || !(critic_lr >= 0)) {
    throw ConfigError("learning rates must be >= 0");
  }
  if (!(grad_clip_norm > 0)) throw ConfigError("train.grad_clip_norm must be > 0");
  if (critic_epochs < 1 || actor_epochs < 1) {
    throw ConfigError("epoch counts must be >= 1");
  }
  if (!(temperature > 0)) throw ConfigError("train.temperature must be > 0");
  if (max_iterations < 1) throw ConfigError("train.max_iterations must be >= 1");
  if (time_budget < 0) throw ConfigError("train.time_budget must be >= 0");
  if (prm_samples_per_state < 1) {
    throw ConfigError("prm.samples_per_state must be >= 1");
  }
  if (eval_every < 1) throw ConfigError("train.eval_every must be >= 1");
  if (eval_episodes_per_task < 1) {
    throw ConfigError("train.eval_episodes_per_task must be >= 1");
  }
  if (!(target_success_rate > 0 && target_success_rate <= 1)) {
    throw ConfigError("train.target_sr must be in (0, 1]");
  }
  if (warmup_iterations < 0) throw ConfigError("train.warmup_iterations must be >= 0");
  reward.validate();
}

Real ppo_clip_objective(Real ratio, Real advantage, Real epsilon) {
  const Real clipped = std::clamp(ratio, 1 - epsilon, 1 + epsilon);
  return std::min(ratio * advantage, clipped * advantage);
}

Real actor_update(PolicyParams& policy, std::span<const ActorRecord> records,
                  Real clip_ratio, int epochs, OptimizerState& opt) {
  if (records.empty()) throw ContractError("actor update without records");
  Real first_epoch_loss = 0.0;
  for (int epoch = 0; epoch < epochs; ++epoch) {
    Matrix grad = Matrix::Zero(policy.action_count(), policy.feature_dim());
    Real objective_sum = 0.0;
    const Real scale = 1.0 / static_cast<Real>(records.size());
    for (const ActorRecord& record : records) {
      if (!std::isfinite(record.old_logprob)) {
        throw NumericError("corrupt actor record: non-finite old log-prob");
      }
      const Real logp = log_prob(policy.weights, record.features, record.action);
      const Real ratio = std::exp(logp - record.old_logprob);
      if (!std::isfinite(ratio)) {
        throw NumericError("non-finite importance ratio");
      }
      const Real unclipped = ratio * record.advantage;
      const Real clipped =
          std::clamp(ratio, 1 - clip_ratio, 1 + clip_ratio) * record.advantage;
      objective_sum += std::min(unclipped, clipped);
      // Gradient follows the branch the min selects; ties go to the
      // unclipped branch, and a clipped branch outside [1-eps, 1+eps]
      // contributes nothing.
      if (unclipped <= clipped) {
        grad.noalias() -= (scale * ratio * record.advantage) *
                          grad_log_prob(policy, record.features, record.action);
      }
    }
    if (epoch == 0) first_epoch_loss = -objective_sum / static_cast<Real>(records.size());
    apply_update(policy, grad, opt);
  }
  return first_epoch_loss;
}

Trainer::Trainer(TrainConfig config, TaskPool train_pool, TaskPool eval_pool,
                 LatencyModel latency, std::uint64_t run_seed, int worker_count)
    : config_(std::move(config)),
      train_pool_(std::move(train_pool)),
      eval_pool_(std::move(eval_pool)),
      latency_(latency),
      run_seed_(run_seed),
      worker_count_(std::max(1, worker_count)) {
  config_.validate();
  latency_.validate();
  if (train_pool_.tasks.empty()) throw ConfigError("empty training pool");
  if (eval_pool_.tasks.empty()) throw ConfigError("empty eval pool");

  // One feature space must cover both pools; they share families.
  TaskPool combined = train_pool_;
  combined.tasks.insert(combined.tasks.end(), eval_pool_.tasks.begin(),
                        eval_pool_.tasks.end());
  features_ = FeatureMap(combined);

  const int actions = train_pool_.params.actions;
  policy_ = make_policy(actions, features_.dimension());
  critic_ = make_critic(actions, features_.dimension(), config_.value_clip);
  prm_ = make_prm(actions, features_.dimension());
  value_ = Vector::Zero(features_.dimension());

  actor_opt_.learning_rate = config_.actor_lr;
  actor_opt_.grad_clip_norm = config_.grad_clip_norm;
  actor_opt_.mode = config_.optimizer;
  critic_opt_.learning_rate = config_.critic_lr;
  critic_opt_.grad_clip_norm = config_.grad_clip_norm;
  critic_opt_.mode = config_.optimizer;
  value_opt_ = critic_opt_;
}

bool Trainer::prm_scoring_enabled() const {
  if (config_.reward.omega_p <= 0) return false;
  if (config_.method == Method::android_coach) return true;
  if (config_.method == Method::ppo) return config_.ppo_use_prm;
  return false;
}

void Trainer::initialize() {
  if (initialized_) return;
  initialized_ = true;

  const bool wants_pretrain = config_.method == Method::android_coach &&
                              config_.critic_init == CriticInit::prm_pretrain;
  if (prm_scoring_enabled() || wants_pretrain) {
    PrmDataset dataset =
        build_prm_dataset(train_pool_, policy_, features_,
                          config_.prm_samples_per_state,
                          derive_seed(run_seed_, 0x707264u));
    if (prm_scoring_enabled()) {
      PrmTrainOptions options = config_.prm_train;
      options.seed = derive_seed(run_seed_, 0x70726du);
      const PrmTrainReport report =
          train_prm(dataset.records, policy_.action_count(),
                    features_.dimension(), options);
      prm_ = report.params;
      prm_holdout_accuracy_ = report.holdout_accuracy;
    }
    if (wants_pretrain) {
      if (dataset.records.empty()) {
        throw DegenerateDatasetError("empty PRM dataset for critic pretraining");
      }
      PrmTrainOptions options = config_.critic_pretrain;
      options.seed = derive_seed(run_seed_, 0x637072u);
      critic_ = pretrain_critic(std::move(critic_), dataset.records, options);
      critic_.value_clip = config_.value_clip;
    }
  }

  if (config_.method == Method::android_coach &&
      config_.critic_init == CriticInit::online_warmup) {
    // Critic-only warm-up on real rollouts; charged to the clock.
    for (int w = 0; w < config_.warmup_iterations; ++w) {
      const std::vector<TaskSpec> batch = next_batch(config_.batch_size);
      std::vector<Trajectory> trajectories = rollout(batch);
      assign_rewards_and_returns(batch, trajectories, config_.reward,
                                 prm_scoring_enabled());
      update_critic(batch, trajectories);
      ++iteration_;  // keeps per-iteration seed streams distinct
    }
  }
}

std::vector<TaskSpec> Trainer::next_batch(int count) {
  std::vector<TaskSpec> batch;
  batch.reserve(count);
  const std::int64_t n = static_cast<std::int64_t>(train_pool_.tasks.size());
  for (int j = 0; j < count; ++j) {
    batch.push_back(train_pool_.tasks[(batch_cursor_ + j) % n]);
  }
  batch_cursor_ = (batch_cursor_ + count) % n;
  return batch;
}

std::vector<Trajectory> Trainer::rollout(std::span<const TaskSpec> batch) {
  return pool_rollout(batch, policy_, features_, latency_, clock_,
                      derive_seed(run_seed_, 0x726fu, iteration_),
                      config_.temperature, worker_count_);
}

void Trainer::assign_rewards_and_returns(std::span<const TaskSpec> batch,
                                         std::vector<Trajectory>& trajectories,
                                         const RewardWeights& weights,
                                         bool score_prm) {
  const std::uint64_t noise_base = derive_seed(run_seed_, 0x6e6fu, iteration_);
  for (std::size_t ti = 0; ti < trajectories.size(); ++ti) {
    Trajectory& traj = trajectories[ti];
    const TaskSpec& task = batch[ti];
    traj.outcome_reward = outcome_verify(traj, task);
    if (score_prm) {
      for (std::size_t t = 0; t < traj.steps.size(); ++t) {
        StepRecord& step = traj.steps[t];
        step.process_reward =
            prm_score(prm_, features_.encode(task, step.screen), step.action,
                      weights, derive_seed(noise_base, ti, t));
      }
    }
    const std::vector<Real> returns = compute_returns(traj, weights);
    for (std::size_t t = 0; t < traj.steps.size(); ++t) {
      traj.steps[t].return_target = returns[t];
    }
    traj.returns_assigned = true;
  }
}

Real Trainer::update_critic(std::span<const TaskSpec> batch,
                            std::span<const Trajectory> trajectories) {
  // Snapshot predictions anchor the value clip for every epoch.
  struct Item {
    Vector features;
    int action;
    Real target;
    Real q_old;
  };
  std::vector<Item> items;
  for (std::size_t ti = 0; ti < trajectories.size(); ++ti) {
    if (!trajectories[ti].returns_assigned) {
      throw ContractError("critic update before return targets were assigned");
    }
    for (const StepRecord& step : trajectories[ti].steps) {
      Item item;
      item.features = features_.encode(batch[ti], step.screen);
      item.action = step.action;
      item.target = step.return_target;
      item.q_old = q_value(critic_, item.features, item.action);
      items.push_back(std::move(item));
    }
  }
  if (items.empty()) throw ContractError("critic update without records");

  Real first_epoch_loss = 0.0;
  for (int epoch = 0; epoch < config_.critic_epochs; ++epoch) {
    Matrix grad = Matrix::Zero(critic_.action_count(), critic_.feature_dim());
    Real loss_sum = 0.0;
    for (const Item& item : items) {
      const CriticLossGrad lg = critic_loss_and_grad(
          critic_, item.features, item.action, item.target, item.q_old);
      grad += lg.grad;
      loss_sum += lg.loss;
    }
    grad /= static_cast<Real>(items.size());
    apply_update(critic_, grad, critic_opt_);
    clock_.charge_update(latency_.update_cost);
    if (epoch == 0) first_epoch_loss = loss_sum / static_cast<Real>(items.size());
  }
  return first_epoch_loss;
}

TrainerMetricsRow Trainer::finish_row(std::span<const Trajectory> trajectories,
                                      Real critic_loss, Real actor_loss) {
  last_trajectories_.assign(trajectories.begin(), trajectories.end());
  TrainerMetricsRow row;
  row.iteration = iteration_ + 1;
  row.total_time = clock_.total_time();
  row.env_time = clock_.env_time();
  row.inference_time = clock_.inference_time();
  row.update_time = clock_.update_time();
  row.interaction_count = clock_.interaction_count();
  row.sampled_action_count = clock_.sampled_action_count();
  Real reward_sum = 0.0;
  for (const Trajectory& traj : trajectories) reward_sum += traj.outcome_reward;
  row.mean_outcome_reward = reward_sum / static_cast<Real>(trajectories.size());
  if ((iteration_ + 1) % config_.eval_every == 0) last_eval_ = evaluate();
  row.eval_success_rate = last_eval_;
  row.mean_critic_loss = critic_loss;
  row.mean_actor_loss = actor_loss;
  return row;
}

TrainerMetricsRow Trainer::run_iteration() {
  initialize();

  // Atomic iteration: on any failure, parameters, counters and the clock
  // roll back to their pre-iteration values.
  const PolicyParams policy_backup = policy_;
  const CriticParams critic_backup = critic_;
  const Vector value_backup = value_;
  const SimClock clock_backup = clock_;
  const OptimizerState actor_opt_backup = actor_opt_;
  const OptimizerState critic_opt_backup = critic_opt_;
  const OptimizerState value_opt_backup = value_opt_;
  const std::int64_t cursor_backup = batch_cursor_;
  const Real last_eval_backup = last_eval_;

  try {
    TrainerMetricsRow row;
    switch (config_.method) {
      case Method::android_coach: row = run_iteration_android_coach(); break;
      case Method::ppo: row = run_iteration_ppo(); break;
      case Method::grpo: row = run_iteration_grpo(); break;
    }
    ++iteration_;
    history_.push_back(row);
    return row;
  } catch (...) {
    policy_ = policy_backup;
    critic_ = critic_backup;
    value_ = value_backup;
    clock_ = clock_backup;
    actor_opt_ = actor_opt_backup;
    critic_opt_ = critic_opt_backup;
    value_opt_ = value_opt_backup;
    batch_cursor_ = cursor_backup;
    last_eval_ = last_eval_backup;
    throw;
  }
}

TrainerMetricsRow Trainer::run_iteration_android_coach() {
  // Phase 1: actor data collection.
  const std::vector<TaskSpec> batch = next_batch(config_.batch_size);
  std::vector<Trajectory> trajectories = rollout(batch);

  // Phase 2: assign process/outcome rewards and return targets.
  assign_rewards_and_returns(batch, trajectories, config_.reward,
                             prm_scoring_enabled());

  // Phase 3: critic update on the iteration buffer.
  const Real critic_loss = update_critic(batch, trajectories);
  const std::uint64_t critic_version = critic_.version;

  // Phase 4: snapshot, resample k actions per collected state, score with
  // the phase-3 critic, ACLOO advantages, clipped policy update.
  take_snapshot(policy_);
  const Matrix& snapshot = *policy_.snapshot_weights;
  std::vector<ActorRecord> records;
  std::int64_t state_index = 0;
  for (std::size_t ti = 0; ti < trajectories.size(); ++ti) {
    const TaskSpec& task = batch[ti];
    for (const StepRecord& step : trajectories[ti].steps) {
      const Vector x = features_.encode(task, step.screen);
      RandomStream rng(derive_seed(run_seed_, 0x61u, iteration_, state_index));
      QGroup group;
      group.features = x;
      const Vector logprobs = log_prob_all(snapshot, x);
      int fresh_samples = config_.k;
      if (config_.include_executed) {
        group.actions.push_back(step.action);
        --fresh_samples;
      }
      for (int i = 0; i < fresh_samples; ++i) {
        group.actions.push_back(
            sample_action(snapshot, x, config_.temperature, rng).action);
      }
      if (config_.charge_resample_inference) {
        clock_.charge_inference(fresh_samples * latency_.inference_cost);
      }
      clock_.count_sampled_actions(fresh_samples);

      if (critic_.version != critic_version) {
        throw ContractError("phase-4 critic is not the phase-3 critic");
      }
      const int k = group.size();
      group.q_values = Vector::Zero(k);
      group.old_logprobs = Vector::Zero(k);
      for (int i = 0; i < k; ++i) {
        group.q_values(i) = q_value(critic_, x, group.actions[i]);
        group.old_logprobs(i) = logprobs(group.actions[i]);
      }
      if (k >= 2) {
        for (const AdvantageRecord& adv : acloo(group)) {
          records.push_back(
              ActorRecord{x, adv.action, adv.advantage, adv.old_logprob});
        }
      } else {
        // k = 1: no leave-one-out peers; raw Q acts as the advantage.
        records.push_back(
            ActorRecord{x, group.actions[0], group.q_values(0),
                        group.old_logprobs(0)});
      }
      ++state_index;
    }
  }

  if (config_.normalize_advantages && records.size() >= 2) {
    Real mean = 0.0;
    for (const ActorRecord& r : records) mean += r.advantage;
    mean /= static_cast<Real>(records.size());
    Real var = 0.0;
    for (const ActorRecord& r : records) {
      var += (r.advantage - mean) * (r.advantage - mean);
    }
    const Real stddev = std::sqrt(var / static_cast<Real>(records.size()));
    for (ActorRecord& r : records) {
      r.advantage = (r.advantage - mean) / (stddev + 1e-8);
    }
  }

  const Real actor_loss = actor_update(policy_, records, config_.clip_ratio,
                                       config_.actor_epochs, actor_opt_);
  clock_.charge_update(config_.actor_epochs * latency_.update_cost);
  return finish_row(trajectories, critic_loss, actor_loss);
}

TrainerMetricsRow Trainer::run_iteration_ppo() {
  const std::vector<TaskSpec> batch = next_batch(config_.batch_size);
  std::vector<Trajectory> trajectories = rollout(batch);

  RewardWeights weights = config_.reward;
  if (!config_.ppo_use_prm) weights.omega_p = 0.0;  // outcome-only baseline
  assign_rewards_and_returns(batch, trajectories, weights,
                             prm_scoring_enabled());

  // Linear state-value baseline regressed to the Monte Carlo returns.
  struct Item {
    Vector features;
    int action;
    Real target;
    Real old_logprob;
  };
  std::vector<Item> items;
  for (std::size_t ti = 0; ti < trajectories.size(); ++ti) {
    for (const StepRecord& step : trajectories[ti].steps) {
      items.push_back(Item{features_.encode(batch[ti], step.screen), step.action,
                           step.return_target, step.old_logprob});
    }
  }
  Real value_loss = 0.0;
  for (int epoch = 0; epoch < config_.critic_epochs; ++epoch) {
    Vector grad = Vector::Zero(value_.size());
    Real loss_sum = 0.0;
    for (const Item& item : items) {
      const Real err = value_.dot(item.features) - item.target;
      loss_sum += 0.5 * err * err;
      grad += err * item.features;
    }
    grad /= static_cast<Real>(items.size());
    Matrix value_as_matrix = value_.transpose();
    const Matrix grad_as_matrix = grad.transpose();
    apply_update(value_as_matrix, grad_as_matrix, value_opt_);
    value_ = value_as_matrix.transpose();
    clock_.charge_update(latency_.update_cost);
    if (epoch == 0) value_loss = loss_sum / static_cast<Real>(items.size());
  }

  take_snapshot(policy_);
  std::vector<ActorRecord> records;
  records.reserve(items.size());
  for (const Item& item : items) {
    const Real advantage = item.target - value_.dot(item.features);
    records.push_back(
        ActorRecord{item.features, item.action, advantage, item.old_logprob});
  }
  const Real actor_loss = actor_update(policy_, records, config_.clip_ratio,
                                       config_.actor_epochs, actor_opt_);
  clock_.charge_update(config_.actor_epochs * latency_.update_cost);
  return finish_row(trajectories, value_loss, actor_loss);
}

TrainerMetricsRow Trainer::run_iteration_grpo() {
  const std::vector<TaskSpec> tasks = next_batch(config_.batch_size);
  std::vector<TaskSpec> expanded;
  expanded.reserve(tasks.size() * config_.grpo_group_size);
  for (const TaskSpec& task : tasks) {
    for (int g = 0; g < config_.grpo_group_size; ++g) expanded.push_back(task);
  }
  std::vector<Trajectory> trajectories = rollout(expanded);
  for (std::size_t i = 0; i < trajectories.size(); ++i) {
    trajectories[i].outcome_reward = outcome_verify(trajectories[i], expanded[i]);
  }

  std::vector<ActorRecord> records;
  for (std::size_t base = 0; base < trajectories.size();
       base += config_.grpo_group_size) {
    Vector rewards(config_.grpo_group_size);
    for (int g = 0; g < config_.grpo_group_size; ++g) {
      rewards(g) = trajectories[base + g].outcome_reward;
    }
    const Vector advantages = grpo_normalize(rewards, config_.grpo_std_floor,
                                             config_.grpo_sample_std);
    for (int g = 0; g < config_.grpo_group_size; ++g) {
      const Trajectory& traj = trajectories[base + g];
      const TaskSpec& task = expanded[base + g];
      for (const StepRecord& step : traj.steps) {
        records.push_back(ActorRecord{features_.encode(task, step.screen),
                                      step.action, advantages(g),
                                      step.old_logprob});
      }
    }
  }

  take_snapshot(policy_);
  const Real actor_loss = actor_update(policy_, records, config_.clip_ratio,
                                       config_.actor_epochs, actor_opt_);
  clock_.charge_update(config_.actor_epochs * latency_.update_cost);
  return finish_row(trajectories, 0.0, actor_loss);
}

Real evaluate_policy(const Matrix& weights, const TaskPool& pool,
                     const FeatureMap& features, const LatencyModel& latency,
                     int episodes_per_task) {
  int successes = 0;
  int episodes = 0;
  for (const TaskSpec& task : pool.tasks) {
    for (int e = 0; e < episodes_per_task; ++e) {
      SimClock scratch;  // evaluation charges no training clock
      EnvState state = reset(task, scratch, latency);
      while (!state.done) {
        const Vector logits =
            weights * features.encode(task, state.current_screen);
        int action = 0;
        for (int a = 1; a < logits.size(); ++a) {
          if (logits(a) > logits(action)) action = a;  // ties keep lowest index
        }
        state = step(state, task, action, scratch, latency);
      }
      successes += state.succeeded ? 1 : 0;
      ++episodes;
    }
  }
  return static_cast<Real>(successes) / static_cast<Real>(episodes);
}

Real Trainer::evaluate() const {
  return evaluate_policy(policy_.weights, eval_pool_, features_, latency_,
                         config_.eval_episodes_per_task);
}

std::vector<TrainerMetricsRow> Trainer::run() {
  initialize();
  std::vector<TrainerMetricsRow> rows;
  while (static_cast<std::int64_t>(rows.size()) < config_.max_iterations) {
    if (config_.time_budget > 0 && clock_.total_time() >= config_.time_budget) {
      break;
    }
    rows.push_back(run_iteration());
  }
  return rows;
}

const MethodSummary& CompareReport::summary(Method method) const {
  for (const MethodSummary& s : methods) {
    if (s.method == method) return s;
  }
  throw ContractError("method missing from comparison report");
}

Real CompareReport::efficiency_ratio(Method baseline, Method method) const {
  return summary(baseline).median_time_to_target /
         summary(method).median_time_to_target;
}

CompareReport compare_methods(std::span<const TrainConfig> configs,
                              const TaskPool& train_pool, const TaskPool& eval_pool,
                              const LatencyModel& latency, Real time_budget,
                              std::span<const std::uint64_t> seeds,
                              int worker_count) {
  if (configs.empty()) throw ConfigError("compare needs at least one method");
  if (seeds.empty()) throw ConfigError("compare needs at least one seed");
  if (time_budget < 0) throw ConfigError("compare time budget must be >= 0");

  CompareReport report;
  report.time_budget = time_budget;
  report.target_sr = configs[0].target_success_rate;

  for (const TrainConfig& config : configs) {
    MethodSummary summary;
    summary.method = config.method;
    std::vector<Real> times;
    for (const std::uint64_t seed : seeds) {
      TrainConfig run_config = config;
      run_config.time_budget = time_budget;
      Trainer trainer(run_config, train_pool, eval_pool, latency, seed,
                      worker_count);
      MethodRunResult result;
      result.method = config.method;
      result.seed = seed;
      // A zero budget degenerates to empty curves with censored targets.
      if (time_budget > 0) result.rows = trainer.run();
      for (const TrainerMetricsRow& row : result.rows) {
        if (row.eval_success_rate >= config.target_success_rate) {
          result.time_to_target = row.total_time;
          break;
        }
      }
      result.final_eval_sr =
          result.rows.empty() ? 0.0 : result.rows.back().eval_success_rate;
      times.push_back(result.time_to_target.value_or(time_budget));
      summary.censored += result.time_to_target ? 0 : 1;
      summary.runs.push_back(std::move(result));
    }
    std::sort(times.begin(), times.end());
    const std::size_t n = times.size();
    summary.median_time_to_target =
        n % 2 == 1 ? times[n / 2] : 0.5 * (times[n / 2 - 1] + times[n / 2]);
    report.methods.push_back(std::move(summary));
  }
  return report;
}

}  // namespace ssma
