#include "ssma/env.hpp"

namespace ssma {

EnvState reset(const TaskSpec& task, SimClock& clock, const LatencyModel& latency) {
  clock.charge_env(latency.init_cost);
  EnvState state;
  state.task_id = task.task_id;
  state.current_screen = task.start_screen;
  return state;
}

EnvState step(const EnvState& state, const TaskSpec& task, int action,
              SimClock& clock, const LatencyModel& latency) {
  if (state.done) throw ContractError("step on a finished episode");
  if (action < 0 || action >= task.graph.actions_per_screen) {
    throw ContractError("action index out of range");
  }

  EnvState next = state;
  next.history.push_back(action);
  next.step_index = static_cast<int>(next.history.size());
  clock.charge_env(latency.step_cost);
  clock.count_interaction();

  if (action == task.graph.terminal_action_index) {
    next.done = true;
    next.succeeded = (state.current_screen == task.goal_screen);
  } else {
    next.current_screen = task.graph.successor(state.current_screen, action);
    if (next.step_index >= task.max_steps) next.done = true;
  }
  if (next.done && !next.succeeded) clock.charge_env(latency.recovery_cost);
  return next;
}

int outcome_verify(const Trajectory& trajectory, const TaskSpec& task) {
  if (!trajectory.done) {
    throw ContractError("outcome_verify requires a complete trajectory");
  }
  if (trajectory.steps.empty() ||
      static_cast<int>(trajectory.steps.size()) > task.max_steps) {
    return 0;
  }
  int screen = task.start_screen;
  for (std::size_t i = 0; i < trajectory.steps.size(); ++i) {
    const int action = trajectory.steps[i].action;
    if (action == task.graph.terminal_action_index) {
      // Terminal must be the last recorded action to count at all.
      return (i + 1 == trajectory.steps.size() && screen == task.goal_screen) ? 1 : 0;
    }
    screen = task.graph.successor(screen, action);
  }
  return 0;  // step budget exhausted without a terminal action
}

}  // namespace ssma
