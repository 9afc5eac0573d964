#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ssma/env.hpp"
#include "ssma/features.hpp"
#include "ssma/policy.hpp"
#include "ssma/sim_clock.hpp"

namespace ssma {

/// Rolls out one complete episode per task. Each trajectory owns a random
/// stream derived from (rollout_seed, task index) and a clock shard;
/// shards merge into `clock` in task-index order, so results are
/// bit-identical for any worker count. Every sampled action charges
/// inference_cost, every executed step charges step_cost.
std::vector<Trajectory> pool_rollout(std::span<const TaskSpec> tasks,
                                     const PolicyParams& policy,
                                     const FeatureMap& features,
                                     const LatencyModel& latency,
                                     SimClock& clock,
                                     std::uint64_t rollout_seed,
                                     Real temperature, int worker_count);

/// JSON-lines serialization, one trajectory per line:
/// {task_id, steps: [{screen, action, old_logprob, r_p}], r_o, sim_times}.
std::string trajectories_to_jsonl(const std::vector<Trajectory>& trajectories);
std::vector<Trajectory> trajectories_from_jsonl(const std::string& text);

}  // namespace ssma
