#include <doctest.h>

#include <cmath>

#include "ssma/env.hpp"
#include "ssma/features.hpp"
#include "ssma/policy.hpp"
#include "ssma/rollout.hpp"
#include "ssma/screen_graph.hpp"
#include "ssma/sim_clock.hpp"

#include "oracles.hpp"

using namespace ssma;

namespace {

PoolParams small_params() {
  PoolParams p;
  p.families = 6;
  p.min_screens = 4;
  p.max_screens = 8;
  p.actions = 4;
  p.max_steps = 25;
  return p;
}

/// Two screens; every non-terminal action self-loops on the start, which
/// is also the goal. Uniform success probability has a closed form.
TaskSpec trivial_self_loop_task(int actions) {
  TaskSpec task;
  task.task_id = 7000;
  task.family = 0;
  task.graph.screen_count = 2;
  task.graph.actions_per_screen = actions;
  task.graph.terminal_action_index = 0;
  task.graph.edges = IntMatrix::Constant(2, actions, -1);
  for (int a = 1; a < actions; ++a) {
    task.graph.edges(0, a) = 0;
    task.graph.edges(1, a) = 0;
  }
  task.start_screen = 0;
  task.goal_screen = 0;
  task.max_steps = 25;
  return task;
}

TaskPool single_task_pool(const TaskSpec& task) {
  TaskPool pool;
  pool.params.families = task.family + 1;
  pool.params.actions = task.graph.actions_per_screen;
  pool.params.max_steps = task.max_steps;
  pool.tasks = {task};
  return pool;
}

}  // namespace

TEST_CASE("task pool generation is deterministic and valid") {
  const PoolParams params = small_params();
  const TaskPool a = generate_task_pool(7, 100, params);
  const TaskPool b = generate_task_pool(7, 100, params);
  CHECK(a.tasks.size() == 100);
  CHECK(pool_to_json(a) == pool_to_json(b));

  // No duplicate ids, and every task satisfies its invariants.
  std::vector<std::int64_t> ids;
  for (const TaskSpec& t : a.tasks) {
    t.validate();
    ids.push_back(t.task_id);
    const GoalRouting routing = route_to_goal(t.graph, t.goal_screen);
    CHECK(routing.distance(t.start_screen) >= params.min_goal_distance);
    CHECK(routing.distance(t.start_screen) <= params.max_goal_distance);
  }
  std::sort(ids.begin(), ids.end());
  CHECK(std::adjacent_find(ids.begin(), ids.end()) == ids.end());
}

TEST_CASE("single-task pools reseed identically, different seeds differ") {
  const PoolParams params = small_params();
  CHECK(pool_to_json(generate_task_pool(7, 1, params)) ==
        pool_to_json(generate_task_pool(7, 1, params)));
  CHECK(pool_to_json(generate_task_pool(7, 100, params)) !=
        pool_to_json(generate_task_pool(8, 100, params)));
}

TEST_CASE("invalid pool parameter ranges are rejected") {
  PoolParams p = small_params();
  p.min_screens = 2;
  CHECK_THROWS_AS(generate_task_pool(1, 10, p), ConfigError);
  p = small_params();
  p.actions = 1;
  CHECK_THROWS_AS(generate_task_pool(1, 10, p), ConfigError);
  p = small_params();
  p.max_goal_distance = p.min_screens;  // deeper than any min-size family
  CHECK_THROWS_AS(generate_task_pool(1, 10, p), ConfigError);
  CHECK_THROWS_AS(generate_task_pool(1, 0, small_params()), ConfigError);
}

TEST_CASE("pool JSON round trip preserves every task") {
  const TaskPool pool = generate_task_pool(11, 20, small_params());
  const TaskPool back = pool_from_json(pool_to_json(pool));
  CHECK(pool_to_json(back) == pool_to_json(pool));
}

TEST_CASE("reset places the agent at the start and charges init cost") {
  const TaskPool pool = generate_task_pool(3, 4, small_params());
  const TaskSpec& task = pool.tasks[0];
  LatencyModel latency;
  SimClock clock;
  const EnvState state = reset(task, clock, latency);
  CHECK(state.current_screen == task.start_screen);
  CHECK(state.step_index == 0);
  CHECK(state.history.empty());
  CHECK(!state.done);
  CHECK(clock.env_time() == doctest::Approx(20.0).epsilon(1e-15));

  SimClock clock2;
  const EnvState again = reset(task, clock2, latency);
  CHECK(again.current_screen == state.current_screen);
  CHECK(again.step_index == state.step_index);
}

TEST_CASE("step semantics: terminal action, edges, truncation, accounting") {
  const TaskSpec task = trivial_self_loop_task(4);
  LatencyModel latency;
  latency.step_cost = 2.5;

  SUBCASE("terminal at goal succeeds") {
    SimClock clock;
    EnvState s = reset(task, clock, latency);
    s = step(s, task, task.graph.terminal_action_index, clock, latency);
    CHECK(s.done);
    CHECK(s.succeeded);
    CHECK(clock.interaction_count() == 1);
  }

  SUBCASE("terminal off goal fails and charges recovery") {
    TaskSpec moved = task;
    moved.graph.edges(0, 1) = 1;  // action 1 leaves the goal
    SimClock clock;
    EnvState s = reset(moved, clock, latency);
    s = step(s, moved, 1, clock, latency);
    CHECK(s.current_screen == 1);
    const Real env_before = clock.env_time();
    s = step(s, moved, moved.graph.terminal_action_index, clock, latency);
    CHECK(s.done);
    CHECK(!s.succeeded);
    CHECK(clock.env_time() ==
          doctest::Approx(env_before + latency.step_cost + latency.recovery_cost));
  }

  SUBCASE("three steps contribute exactly 3 * step_cost before recovery") {
    SimClock clock;
    EnvState s = reset(task, clock, latency);
    const Real after_init = clock.env_time();
    s = step(s, task, 1, clock, latency);
    s = step(s, task, 2, clock, latency);
    s = step(s, task, 3, clock, latency);
    CHECK(clock.env_time() == doctest::Approx(after_init + 7.5).epsilon(1e-15));
    CHECK(clock.interaction_count() == 3);
  }

  SUBCASE("episodes truncate at max_steps as failures") {
    SimClock clock;
    EnvState s = reset(task, clock, latency);
    for (int t = 0; t < task.max_steps; ++t) {
      CHECK(!s.done);
      s = step(s, task, 1, clock, latency);
    }
    CHECK(s.done);
    CHECK(!s.succeeded);
    CHECK(s.step_index == task.max_steps);
    CHECK_THROWS_AS(step(s, task, 1, clock, latency), ContractError);
  }
}

TEST_CASE("outcome_verify replays the rule independently of env flags") {
  const TaskPool pool = generate_task_pool(5, 6, small_params());
  const TaskSpec& task = pool.tasks[2];
  const GoalRouting routing = route_to_goal(task.graph, task.goal_screen);

  Trajectory traj;
  traj.task_id = task.task_id;
  traj.done = true;

  SUBCASE("oracle path then terminal verifies as success") {
    int screen = task.start_screen;
    while (screen != task.goal_screen) {
      const int a = routing.oracle_action(screen);
      traj.steps.push_back(StepRecord{screen, a, 0.0, 0, 0.0});
      screen = task.graph.successor(screen, a);
    }
    traj.steps.push_back(
        StepRecord{screen, task.graph.terminal_action_index, 0.0, 0, 0.0});
    CHECK(outcome_verify(traj, task) == 1);
  }

  SUBCASE("budget exhaustion without terminal verifies as failure") {
    int screen = task.start_screen;
    for (int t = 0; t < task.max_steps; ++t) {
      const int a = routing.oracle_action(screen) ==
                            task.graph.terminal_action_index
                        ? (task.graph.terminal_action_index + 1) %
                              task.graph.actions_per_screen
                        : routing.oracle_action(screen);
      traj.steps.push_back(StepRecord{screen, a, 0.0, 0, 0.0});
      screen = task.graph.successor(screen, a);
    }
    CHECK(outcome_verify(traj, task) == 0);
  }

  SUBCASE("terminal on the wrong screen verifies as failure") {
    // Find a non-goal screen reachable in one non-terminal hop.
    int action = -1;
    for (int a = 0; a < task.graph.actions_per_screen; ++a) {
      if (a == task.graph.terminal_action_index) continue;
      if (task.graph.successor(task.start_screen, a) != task.goal_screen) {
        action = a;
        break;
      }
    }
    if (action >= 0) {
      traj.steps.push_back(StepRecord{task.start_screen, action, 0.0, 0, 0.0});
      traj.steps.push_back(
          StepRecord{task.graph.successor(task.start_screen, action),
                     task.graph.terminal_action_index, 0.0, 0, 0.0});
      CHECK(outcome_verify(traj, task) == 0);
    }
  }

  SUBCASE("incomplete trajectories violate the contract") {
    traj.done = false;
    CHECK_THROWS_AS(outcome_verify(traj, task), ContractError);
  }
}

TEST_CASE("pool_rollout completes every task and is worker-count invariant") {
  const TaskPool pool = generate_task_pool(17, 8, small_params());
  TaskPool combined = pool;
  const FeatureMap features(combined);
  const PolicyParams policy = make_policy(pool.params.actions, features.dimension());
  const LatencyModel latency;

  SimClock clock1, clock8;
  const std::vector<Trajectory> serial =
      pool_rollout(pool.tasks, policy, features, latency, clock1, 99, 1.0, 1);
  const std::vector<Trajectory> parallel =
      pool_rollout(pool.tasks, policy, features, latency, clock8, 99, 1.0, 8);

  CHECK(serial.size() == 8);
  for (const Trajectory& t : serial) {
    CHECK(t.done);
    CHECK(t.steps.size() >= 1);
    CHECK(t.steps.size() <= static_cast<std::size_t>(pool.params.max_steps));
  }
  CHECK(trajectories_to_jsonl(serial) == trajectories_to_jsonl(parallel));
  CHECK(clock1.env_time() == clock8.env_time());
  CHECK(clock1.inference_time() == clock8.inference_time());
  CHECK(clock1.interaction_count() == clock8.interaction_count());
  CHECK(clock1.sampled_action_count() == clock8.sampled_action_count());

  // Conservation and counter identities.
  CHECK(clock1.total_time() ==
        clock1.env_time() + clock1.inference_time() + clock1.update_time());
  std::int64_t steps = 0;
  for (const Trajectory& t : serial) steps += static_cast<std::int64_t>(t.steps.size());
  CHECK(clock1.interaction_count() == steps);
  CHECK(clock1.sampled_action_count() == steps);

  CHECK_THROWS_AS(pool_rollout(pool.tasks, PolicyParams{Matrix::Constant(4, features.dimension(), std::nan("")), std::nullopt, 0},
                               features, latency, clock1, 99, 1.0, 1),
                  NumericError);
}

TEST_CASE("uniform policy success rate matches the exact enumeration oracle") {
  const TaskSpec task = trivial_self_loop_task(4);
  const TaskPool pool = single_task_pool(task);
  const FeatureMap features(pool);
  const PolicyParams policy = make_policy(4, features.dimension());
  const LatencyModel latency;

  // Closed form for the self-loop task: stay on the goal forever, so
  // success = 1 - (1 - 1/A)^T.
  const Real closed_form = 1.0 - std::pow(0.75, task.max_steps);
  const Vector uniform = Vector::Constant(4, 0.25);
  const Real dp = ssma::testing::exact_success_probability(
      task, [&](int) { return uniform; });
  CHECK(dp == doctest::Approx(closed_form).epsilon(1e-12));

  int successes = 0;
  const int episodes = 1000;
  SimClock clock;
  for (int e = 0; e < episodes; ++e) {
    const std::vector<Trajectory> out = pool_rollout(
        std::span<const TaskSpec>(&task, 1), policy, features, latency, clock,
        derive_seed(1234, e), 1.0, 1);
    successes += out[0].succeeded ? 1 : 0;
    CHECK(out[0].succeeded == (outcome_verify(out[0], task) == 1));
  }
  const Real rate = static_cast<Real>(successes) / episodes;
  const Real se = std::sqrt(closed_form * (1 - closed_form) / episodes);
  CHECK(std::abs(rate - closed_form) <= 4 * se + 1e-9);

  // Same check on a generated task with real structure.
  const TaskPool generated = generate_task_pool(21, 1, small_params());
  const TaskSpec& gtask = generated.tasks[0];
  const FeatureMap gfeatures(generated);
  const PolicyParams gpolicy = make_policy(4, gfeatures.dimension());
  const Vector guniform = Vector::Constant(4, 0.25);
  const Real gdp = ssma::testing::exact_success_probability(
      gtask, [&](int) { return guniform; });
  int gsuccesses = 0;
  SimClock gclock;
  for (int e = 0; e < episodes; ++e) {
    const std::vector<Trajectory> out = pool_rollout(
        std::span<const TaskSpec>(&gtask, 1), gpolicy, gfeatures, latency,
        gclock, derive_seed(777, e), 1.0, 1);
    gsuccesses += out[0].succeeded ? 1 : 0;
  }
  const Real grate = static_cast<Real>(gsuccesses) / episodes;
  const Real gse = std::sqrt(gdp * (1 - gdp) / episodes) + 1e-9;
  CHECK(std::abs(grate - gdp) <= 4 * gse);
}

TEST_CASE("trajectory JSONL round trip") {
  const TaskPool pool = generate_task_pool(31, 3, small_params());
  const FeatureMap features(pool);
  const PolicyParams policy = make_policy(pool.params.actions, features.dimension());
  SimClock clock;
  std::vector<Trajectory> out = pool_rollout(pool.tasks, policy, features,
                                             LatencyModel{}, clock, 5, 1.0, 2);
  out[0].outcome_reward = 1;
  out[0].steps[0].process_reward = 1;
  const std::string jsonl = trajectories_to_jsonl(out);
  const std::vector<Trajectory> back = trajectories_from_jsonl(jsonl);
  CHECK(trajectories_to_jsonl(back) == jsonl);
}

TEST_CASE("default latency calibration keeps env/inference near 1.7") {
  // Measured the way the rollout loop charges it, on the default pool
  // with the untrained (uniform) policy.
  PoolParams params;  // defaults
  const TaskPool pool = generate_task_pool(42, 80, params);
  const FeatureMap features(pool);
  const PolicyParams policy = make_policy(params.actions, features.dimension());
  const LatencyModel latency;
  SimClock clock;
  pool_rollout(pool.tasks, policy, features, latency, clock, 2024, 1.0, 2);
  const Real ratio = clock.env_time() / clock.inference_time();
  CHECK(ratio > 1.6);
  CHECK(ratio < 1.8);
}
