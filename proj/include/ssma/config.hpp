#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ssma/estimator_lab.hpp"
#include "ssma/screen_graph.hpp"
#include "ssma/sim_clock.hpp"
#include "ssma/trainer.hpp"

namespace ssma {

/// Full run configuration, loaded from a flat `key = value` text file
/// with dotted sections. Every key is validated against the schema;
/// unknown keys are hard errors.
struct RunConfig {
  // run
  Method method = Method::android_coach;
  std::string out_dir = "runs/out";
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  int workers = 0;  // 0 = auto; SSMA_RL_THREADS caps the final count

  TrainConfig train;
  LatencyModel latency;

  // pool.*
  std::uint64_t pool_seed = 42;
  int pool_count = 60;
  int pool_eval_count = 20;
  PoolParams pool_params;

  bool save_trajectories = false;

  // compare.*
  std::vector<Method> compare_methods_list = {Method::android_coach, Method::ppo,
                                              Method::grpo};
  Real compare_time_budget = 400000.0;

  LabConfig lab;

  // eval.*
  std::string eval_checkpoint;

  void validate() const;
  TrainConfig to_train_config(Method method) const;
};

/// Parses configuration text. Throws ConfigError naming the offending
/// key on unknown keys, bad values, or failed validation.
RunConfig parse_config_text(const std::string& text);
RunConfig load_config_file(const std::string& path);

/// The documented schema: one line per key with type and default.
std::string config_schema_help();

/// Resolves the worker count: explicit config value, else batch-size
/// bound, both capped by the SSMA_RL_THREADS environment variable.
int resolve_worker_count(const RunConfig& config);

}  // namespace ssma
