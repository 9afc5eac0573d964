#include "ssma/rollout.hpp"

#include <atomic>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "ssma/rng.hpp"

namespace ssma {

namespace {

Trajectory run_episode(const TaskSpec& task, const PolicyParams& policy,
                       const FeatureMap& features, const LatencyModel& latency,
                       SimClock& shard, std::uint64_t stream_seed,
                       Real temperature) {
  RandomStream rng(stream_seed);
  Trajectory traj;
  traj.task_id = task.task_id;

  EnvState state = reset(task, shard, latency);
  while (!state.done) {
    const Vector x = features.encode(task, state.current_screen);
    shard.charge_inference(latency.inference_cost);
    shard.count_sampled_actions();
    const SampledAction sampled = sample_action(policy.weights, x, temperature, rng);
    StepRecord record;
    record.screen = state.current_screen;
    record.action = sampled.action;
    record.old_logprob = sampled.logprob;
    traj.steps.push_back(record);
    state = step(state, task, sampled.action, shard, latency);
  }
  traj.succeeded = state.succeeded;
  traj.done = true;
  return traj;
}

}  // namespace

std::vector<Trajectory> pool_rollout(std::span<const TaskSpec> tasks,
                                     const PolicyParams& policy,
                                     const FeatureMap& features,
                                     const LatencyModel& latency,
                                     SimClock& clock,
                                     std::uint64_t rollout_seed,
                                     Real temperature, int worker_count) {
  if (tasks.empty()) throw ConfigError("pool_rollout needs at least one task");
  if (!policy.finite()) throw NumericError("non-finite policy parameters");

  const int n = static_cast<int>(tasks.size());
  std::vector<Trajectory> trajectories(n);
  std::vector<SimClock> shards(n);

  auto run_one = [&](int i) {
    trajectories[i] =
        run_episode(tasks[i], policy, features, latency, shards[i],
                    derive_seed(rollout_seed, static_cast<std::uint64_t>(i)),
                    temperature);
  };

  const int workers = std::max(1, std::min(worker_count, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) run_one(i);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      threads.emplace_back([&]() {
        for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) run_one(i);
      });
    }
    for (std::thread& t : threads) t.join();
  }

  // Phase barrier: merge shards in task-index order.
  for (int i = 0; i < n; ++i) {
    trajectories[i].env_time = shards[i].env_time();
    trajectories[i].inference_time = shards[i].inference_time();
    clock.merge(shards[i]);
  }
  return trajectories;
}

std::string trajectories_to_jsonl(const std::vector<Trajectory>& trajectories) {
  std::ostringstream out;
  for (const Trajectory& traj : trajectories) {
    nlohmann::json steps = nlohmann::json::array();
    for (const StepRecord& s : traj.steps) {
      steps.push_back({{"screen", s.screen},
                       {"action", s.action},
                       {"old_logprob", s.old_logprob},
                       {"r_p", s.process_reward}});
    }
    const nlohmann::json line = {
        {"task_id", traj.task_id},
        {"steps", steps},
        {"r_o", traj.outcome_reward},
        {"sim_times", {{"env", traj.env_time}, {"inference", traj.inference_time}}}};
    out << line.dump() << "\n";
  }
  return out.str();
}

std::vector<Trajectory> trajectories_from_jsonl(const std::string& text) {
  std::vector<Trajectory> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const nlohmann::json j = nlohmann::json::parse(line);
    Trajectory traj;
    traj.task_id = j.at("task_id").get<std::int64_t>();
    traj.outcome_reward = j.at("r_o").get<int>();
    traj.env_time = j.at("sim_times").at("env").get<Real>();
    traj.inference_time = j.at("sim_times").at("inference").get<Real>();
    traj.done = true;
    for (const auto& js : j.at("steps")) {
      StepRecord s;
      s.screen = js.at("screen").get<int>();
      s.action = js.at("action").get<int>();
      s.old_logprob = js.at("old_logprob").get<Real>();
      s.process_reward = js.at("r_p").get<int>();
      traj.steps.push_back(s);
    }
    out.push_back(std::move(traj));
  }
  return out;
}

}  // namespace ssma
