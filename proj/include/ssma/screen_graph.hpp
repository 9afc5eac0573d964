#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ssma/types.hpp"

namespace ssma {

/// Directed navigation graph over screens. Every non-terminal
/// (screen, action) pair has exactly one successor; the distinguished
/// terminal action ends the episode instead of following an edge.
struct ScreenGraph {
  int screen_count = 0;
  int actions_per_screen = 0;
  int terminal_action_index = 0;
  IntMatrix edges;  // screen_count x actions_per_screen, -1 in the terminal column

  int successor(int screen, int action) const { return edges(screen, action); }
  void validate() const;
};

struct TaskSpec {
  std::int64_t task_id = 0;
  int family = 0;  // index of the shared (graph, goal) template within the pool
  ScreenGraph graph;
  int start_screen = 0;
  int goal_screen = 0;
  int max_steps = 25;
  std::uint64_t seed = 0;

  void validate() const;
};

struct PoolParams {
  int families = 10;
  int min_screens = 4;
  int max_screens = 8;
  int actions = 6;
  int max_steps = 25;
  int min_goal_distance = 1;
  int max_goal_distance = 3;

  void validate() const;
};

struct TaskPool {
  PoolParams params;
  std::vector<TaskSpec> tasks;

  int family_count() const;
  /// Screen count of the given family's graph.
  int family_screens(int family) const;
};

/// Deterministically generates `count` tasks over `params.families`
/// shared navigation templates. Tasks of one family share (graph, goal)
/// and cycle through candidate start screens, hardest first.
TaskPool generate_task_pool(std::uint64_t pool_seed, int count,
                            const PoolParams& params);

/// BFS distances to the goal and the per-screen optimal action
/// (lowest-index action on a shortest path; terminal at the goal).
struct GoalRouting {
  IntVector distance;       // per screen, steps to reach the goal screen
  IntVector oracle_action;  // per screen
};
GoalRouting route_to_goal(const ScreenGraph& graph, int goal);

std::string pool_to_json(const TaskPool& pool);
TaskPool pool_from_json(const std::string& text);

}  // namespace ssma
