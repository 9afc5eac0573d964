#pragma once

#include <cstdint>
#include <vector>

#include "ssma/screen_graph.hpp"
#include "ssma/sim_clock.hpp"
#include "ssma/types.hpp"

namespace ssma {

struct EnvState {
  std::int64_t task_id = 0;
  int current_screen = 0;
  int step_index = 0;  // == history.size()
  std::vector<int> history;
  bool done = false;
  bool succeeded = false;
};

struct StepRecord {
  int screen = 0;  // screen the action was taken on
  int action = 0;
  Real old_logprob = 0.0;
  int process_reward = 0;   // r_p, assigned in the return phase
  Real return_target = 0.0; // R_t, assigned in the return phase
};

struct Trajectory {
  std::int64_t task_id = 0;
  std::vector<StepRecord> steps;
  int outcome_reward = 0;  // r_o
  bool succeeded = false;
  bool done = false;
  bool returns_assigned = false;  // set once the return phase filled R_t
  Real env_time = 0.0;        // this episode's simulated env seconds
  Real inference_time = 0.0;  // this episode's simulated inference seconds
};

/// Places the agent on the task's start screen and charges init_cost.
EnvState reset(const TaskSpec& task, SimClock& clock, const LatencyModel& latency);

/// Executes one action. Terminal action ends the episode (success iff
/// taken on the goal screen); reaching max_steps truncates as a failure.
/// Every executed action charges step_cost and counts one interaction;
/// unsuccessful episode ends additionally charge recovery_cost.
EnvState step(const EnvState& state, const TaskSpec& task, int action,
              SimClock& clock, const LatencyModel& latency);

/// Rule-based outcome verifier: replays the trajectory's actions against
/// the task graph and returns 1 iff the terminal action was executed on
/// the goal screen within max_steps. Pure; no model involved.
int outcome_verify(const Trajectory& trajectory, const TaskSpec& task);

}  // namespace ssma
