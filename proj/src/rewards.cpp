#include "ssma/rewards.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ssma/math.hpp"
#include "ssma/rng.hpp"

namespace ssma {

Real prm_logit(const PrmParams& prm, const Vector& features, int action) {
  if (action < 0 || action >= prm.action_count()) {
    throw ContractError("action index out of range");
  }
  return prm.weights.row(action).dot(features) + prm.bias(action);
}

Real prm_probability(const PrmParams& prm, const Vector& features, int action) {
  return sigmoid(prm_logit(prm, features, action));
}

PrmDataset build_prm_dataset(const TaskPool& pool, const PolicyParams& policy,
                             const FeatureMap& features, int samples_per_state,
                             std::uint64_t seed) {
  if (pool.tasks.empty()) throw ConfigError("empty task list");
  if (samples_per_state < 1) throw ConfigError("samples_per_state must be >= 1");
  if (!policy.finite()) throw NumericError("non-finite policy parameters");

  RandomStream rng(derive_seed(seed, 0x9d5u));
  std::vector<StepLabelRecord> all;
  for (const TaskSpec& task : pool.tasks) {
    const GoalRouting routing = route_to_goal(task.graph, task.goal_screen);
    int screen = task.start_screen;
    while (true) {
      const int oracle = routing.oracle_action(screen);
      const Vector x = features.encode(task, screen);
      for (int j = 0; j < samples_per_state; ++j) {
        const SampledAction sampled = sample_action(policy.weights, x, 1.0, rng);
        StepLabelRecord record;
        record.task_id = task.task_id;
        record.screen = screen;
        record.action = sampled.action;
        record.label = (sampled.action == oracle) ? 1 : 0;
        record.features = x;
        all.push_back(std::move(record));
      }
      if (screen == task.goal_screen) break;
      screen = task.graph.successor(screen, oracle);
    }
  }

  // Balance to a 1:1 class ratio by down-sampling the majority class.
  std::vector<int> pos, neg;
  for (int i = 0; i < static_cast<int>(all.size()); ++i) {
    (all[i].label ? pos : neg).push_back(i);
  }
  PrmDataset out;
  if (pos.empty() || neg.empty()) {
    out.records = std::move(all);
    out.degenerate = true;
    return out;
  }
  std::vector<int>& majority = pos.size() > neg.size() ? pos : neg;
  const std::size_t keep = std::min(pos.size(), neg.size());
  for (std::size_t i = majority.size() - 1; i > 0; --i) {
    std::swap(majority[i], majority[rng.below(i + 1)]);
  }
  majority.resize(keep);
  std::vector<int> selected;
  selected.reserve(2 * keep);
  selected.insert(selected.end(), pos.begin(), pos.end());
  selected.insert(selected.end(), neg.begin(), neg.end());
  std::sort(selected.begin(), selected.end());
  out.records.reserve(selected.size());
  for (int i : selected) out.records.push_back(std::move(all[i]));
  return out;
}

namespace {

void check_two_classes(const std::vector<StepLabelRecord>& dataset) {
  if (dataset.empty()) throw DegenerateDatasetError("empty step-label dataset");
  const int first = dataset.front().label;
  for (const StepLabelRecord& r : dataset) {
    if (r.label != first) return;
  }
  throw DegenerateDatasetError("step-label dataset contains a single class");
}

std::vector<int> shuffled_indices(std::size_t n, RandomStream& rng) {
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t i = n; i > 1; --i) {
    std::swap(idx[i - 1], idx[rng.below(i)]);
  }
  return idx;
}

}  // namespace

PrmTrainReport train_prm(const std::vector<StepLabelRecord>& dataset,
                         int action_count, int feature_dim,
                         const PrmTrainOptions& options) {
  check_two_classes(dataset);
  if (options.epochs < 1 || options.batch_size < 1) {
    throw ConfigError("prm training needs epochs >= 1 and batch_size >= 1");
  }

  // Stratified split per (state, action) cell: every cell leaves at least
  // one record in training, so the held-out score measures the learned
  // labeling rule rather than the luck of orphaned singleton cells.
  RandomStream rng(derive_seed(options.seed, 0x7274u));
  std::map<std::pair<std::int64_t, int>, std::vector<int>> cells;
  for (int i = 0; i < static_cast<int>(dataset.size()); ++i) {
    Eigen::Index feature_index = 0;
    dataset[i].features.maxCoeff(&feature_index);
    cells[{static_cast<std::int64_t>(feature_index), dataset[i].action}]
        .push_back(i);
  }
  std::vector<int> train_idx;
  std::vector<int> hold_idx;
  for (auto& [cell, members] : cells) {
    for (std::size_t i = members.size(); i > 1; --i) {
      std::swap(members[i - 1], members[rng.below(i)]);
    }
    const std::size_t held = static_cast<std::size_t>(
        options.holdout_fraction * static_cast<Real>(members.size()));
    for (std::size_t i = 0; i < members.size(); ++i) {
      (i < held ? hold_idx : train_idx).push_back(members[i]);
    }
  }
  if (train_idx.empty()) throw DegenerateDatasetError("no training records left");

  PrmTrainReport report;
  report.params = make_prm(action_count, feature_dim);
  PrmParams& prm = report.params;
  OptimizerState opt;
  opt.learning_rate = options.learning_rate;
  opt.grad_clip_norm = options.grad_clip_norm;

  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    RandomStream epoch_rng(derive_seed(options.seed, 0x6570u, epoch));
    std::vector<int> epoch_order = shuffled_indices(train_idx.size(), epoch_rng);
    Real loss_sum = 0.0;
    for (std::size_t begin = 0; begin < epoch_order.size();
         begin += options.batch_size) {
      const std::size_t end =
          std::min(epoch_order.size(), begin + options.batch_size);
      Matrix grad_w = Matrix::Zero(action_count, feature_dim);
      Vector grad_b = Vector::Zero(action_count);
      for (std::size_t i = begin; i < end; ++i) {
        const StepLabelRecord& r = dataset[train_idx[epoch_order[i]]];
        const Real z = prm_logit(prm, r.features, r.action);
        const Real p = sigmoid(z);
        loss_sum += logistic_loss(z, static_cast<Real>(r.label));
        const Real delta = (p - r.label) / static_cast<Real>(end - begin);
        grad_w.row(r.action) += delta * r.features.transpose();
        grad_b(r.action) += delta;
      }
      // One flat parameter block so the global-norm clip covers the bias.
      Matrix stacked(action_count, feature_dim + 1);
      stacked << prm.weights, prm.bias;
      Matrix grad(action_count, feature_dim + 1);
      grad << grad_w, grad_b;
      apply_update(stacked, grad, opt);
      prm.weights = stacked.leftCols(feature_dim);
      prm.bias = stacked.col(feature_dim);
      ++prm.version;
    }
    report.final_train_loss =
        loss_sum / static_cast<Real>(epoch_order.size());
  }

  const std::vector<int>& eval_idx = hold_idx.empty() ? train_idx : hold_idx;
  int correct = 0;
  for (int i : eval_idx) {
    const StepLabelRecord& r = dataset[i];
    const int predicted = prm_probability(prm, r.features, r.action) > 0.5 ? 1 : 0;
    correct += (predicted == r.label);
  }
  report.holdout_accuracy =
      static_cast<Real>(correct) / static_cast<Real>(eval_idx.size());
  report.train_records = static_cast<int>(train_idx.size());
  report.holdout_records = static_cast<int>(hold_idx.size());
  return report;
}

int prm_score(const PrmParams& prm, const Vector& features, int action,
              const RewardWeights& weights, std::uint64_t noise_seed) {
  const Real p = prm_probability(prm, features, action);
  int reward = p > weights.prm_threshold ? 1 : 0;
  if (weights.prm_noise_rate > 0) {
    RandomStream rng(derive_seed(noise_seed, 0x666cu));
    if (rng.uniform01() < weights.prm_noise_rate) reward = 1 - reward;
  }
  return reward;
}

std::vector<Real> compute_returns(const Trajectory& trajectory,
                                  const RewardWeights& weights) {
  if (!trajectory.done || trajectory.steps.empty()) {
    throw ContractError("compute_returns requires a complete trajectory");
  }
  const int n = static_cast<int>(trajectory.steps.size());
  const Real outcome_term = weights.omega_o * trajectory.outcome_reward;
  std::vector<Real> returns(n);
  if (weights.discount_mode == DiscountMode::as_written) {
    // Backward accumulation of sum_{tau=t..T} gamma^(T-tau) r_p^tau.
    Real tail = 0.0;
    Real power = 1.0;  // gamma^(T - tau), starting at tau = T
    for (int t = n - 1; t >= 0; --t) {
      tail += power * trajectory.steps[t].process_reward;
      power *= weights.gamma;
      returns[t] = weights.omega_p * tail + outcome_term;
    }
  } else {
    Real tail = 0.0;  // sum_{tau=t..T} gamma^(tau-t) r_p^tau
    for (int t = n - 1; t >= 0; --t) {
      tail = trajectory.steps[t].process_reward + weights.gamma * tail;
      returns[t] = weights.omega_p * tail + outcome_term;
    }
  }
  return returns;
}

CriticParams pretrain_critic(CriticParams critic,
                             const std::vector<StepLabelRecord>& dataset,
                             const PrmTrainOptions& options) {
  if (dataset.empty()) throw DegenerateDatasetError("empty step-label dataset");
  OptimizerState opt;
  opt.learning_rate = options.learning_rate;
  opt.grad_clip_norm = options.grad_clip_norm;

  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    RandomStream epoch_rng(derive_seed(options.seed, 0x6372u, epoch));
    std::vector<int> order = shuffled_indices(dataset.size(), epoch_rng);
    for (std::size_t begin = 0; begin < order.size(); begin += options.batch_size) {
      const std::size_t end = std::min(order.size(), begin + options.batch_size);
      Matrix grad = Matrix::Zero(critic.action_count(), critic.feature_dim());
      for (std::size_t i = begin; i < end; ++i) {
        const StepLabelRecord& r = dataset[order[i]];
        const Real err = q_value(critic, r.features, r.action) - r.label;
        grad.row(r.action) +=
            err / static_cast<Real>(end - begin) * r.features.transpose();
      }
      apply_update(critic, grad, opt);
    }
  }
  return critic;
}

std::string prm_dataset_to_jsonl(const std::vector<StepLabelRecord>& records) {
  std::ostringstream out;
  for (const StepLabelRecord& r : records) {
    const nlohmann::json line = {{"task_id", r.task_id},
                                 {"screen", r.screen},
                                 {"action", r.action},
                                 {"label", r.label}};
    out << line.dump() << "\n";
  }
  return out.str();
}

}  // namespace ssma
