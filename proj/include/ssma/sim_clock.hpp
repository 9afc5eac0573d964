#pragma once

#include <cstdint>

#include "ssma/types.hpp"

namespace ssma {

/// Simulated per-event costs, in notional seconds. Stands in for the
/// wall-clock latency profile of an emulator-backed rollout loop.
struct LatencyModel {
  Real init_cost = 20.0;
  Real step_cost = 2.5;
  Real recovery_cost = 10.0;
  Real inference_cost = 4.6;
  Real update_cost = 0.0;

  void validate() const {
    if (!(init_cost > 0) || !(step_cost > 0) || !(recovery_cost > 0) ||
        !(inference_cost > 0)) {
      throw ConfigError("latency costs must be strictly positive");
    }
    if (update_cost < 0) {
      throw ConfigError("latency.update_cost must be non-negative");
    }
  }
};

/// Deterministic accounting of simulated time per cost category plus
/// interaction/sample counters. total_time is derived, so the
/// conservation identity total = env + inference + update holds exactly.
class SimClock {
 public:
  void charge_env(Real seconds) { env_time_ += seconds; }
  void charge_inference(Real seconds) { inference_time_ += seconds; }
  void charge_update(Real seconds) { update_time_ += seconds; }

  void count_interaction(std::int64_t n = 1) { interaction_count_ += n; }
  void count_sampled_actions(std::int64_t n = 1) { sampled_action_count_ += n; }

  /// Fold a per-trajectory shard into this clock. Callers merge shards
  /// in task-index order so totals are independent of scheduling.
  void merge(const SimClock& shard) {
    env_time_ += shard.env_time_;
    inference_time_ += shard.inference_time_;
    update_time_ += shard.update_time_;
    interaction_count_ += shard.interaction_count_;
    sampled_action_count_ += shard.sampled_action_count_;
  }

  Real total_time() const { return env_time_ + inference_time_ + update_time_; }
  Real env_time() const { return env_time_; }
  Real inference_time() const { return inference_time_; }
  Real update_time() const { return update_time_; }
  std::int64_t interaction_count() const { return interaction_count_; }
  std::int64_t sampled_action_count() const { return sampled_action_count_; }

 private:
  Real env_time_ = 0.0;
  Real inference_time_ = 0.0;
  Real update_time_ = 0.0;
  std::int64_t interaction_count_ = 0;
  std::int64_t sampled_action_count_ = 0;
};

}  // namespace ssma
