#include "ssma/screen_graph.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

#include <nlohmann/json.hpp>

#include "ssma/rng.hpp"

namespace ssma {

void ScreenGraph::validate() const {
  if (screen_count < 1 || actions_per_screen < 2) {
    throw ConfigError("screen graph needs >= 1 screen and >= 2 actions");
  }
  if (terminal_action_index < 0 || terminal_action_index >= actions_per_screen) {
    throw ConfigError("terminal action index out of range");
  }
  if (edges.rows() != screen_count || edges.cols() != actions_per_screen) {
    throw ConfigError("edge table shape mismatch");
  }
  for (int s = 0; s < screen_count; ++s) {
    for (int a = 0; a < actions_per_screen; ++a) {
      if (a == terminal_action_index) continue;
      const int next = edges(s, a);
      if (next < 0 || next >= screen_count) {
        throw ConfigError("edge successor out of range");
      }
    }
  }
}

void TaskSpec::validate() const {
  graph.validate();
  if (start_screen < 0 || start_screen >= graph.screen_count ||
      goal_screen < 0 || goal_screen >= graph.screen_count) {
    throw ConfigError("task start/goal screen out of range");
  }
  if (max_steps < 1) throw ConfigError("task max_steps must be >= 1");
  const GoalRouting routing = route_to_goal(graph, goal_screen);
  const int dist = routing.distance(start_screen);
  if (dist < 0 || dist > max_steps - 1) {
    throw ConfigError("goal unreachable from start within max_steps - 1");
  }
}

void PoolParams::validate() const {
  if (families < 1) throw ConfigError("pool.families must be >= 1");
  if (min_screens < 3) throw ConfigError("pool.min_screens must be >= 3");
  if (max_screens < min_screens) {
    throw ConfigError("pool.max_screens must be >= pool.min_screens");
  }
  if (actions < 2) throw ConfigError("pool.actions must be >= 2");
  if (max_steps < 2) throw ConfigError("pool.max_steps must be >= 2");
  if (min_goal_distance < 1 || max_goal_distance < min_goal_distance) {
    throw ConfigError("invalid goal distance range");
  }
  if (max_goal_distance > min_screens - 1) {
    throw ConfigError(
        "pool.max_goal_distance exceeds min_screens - 1; no connected graph "
        "can plant that distance in every family");
  }
  if (max_goal_distance > max_steps - 1) {
    throw ConfigError("pool.max_goal_distance exceeds max_steps - 1");
  }
}

GoalRouting route_to_goal(const ScreenGraph& graph, int goal) {
  const int s_count = graph.screen_count;
  GoalRouting routing;
  routing.distance = IntVector::Constant(s_count, -1);
  routing.oracle_action = IntVector::Constant(s_count, -1);
  routing.distance(goal) = 0;
  routing.oracle_action(goal) = graph.terminal_action_index;

  std::deque<int> frontier{goal};
  // Reverse BFS: repeatedly pull in screens with an edge onto the frontier.
  while (!frontier.empty()) {
    const int cur = frontier.front();
    frontier.pop_front();
    for (int s = 0; s < s_count; ++s) {
      if (routing.distance(s) >= 0) continue;
      for (int a = 0; a < graph.actions_per_screen; ++a) {
        if (a == graph.terminal_action_index) continue;
        if (graph.edges(s, a) == cur) {
          routing.distance(s) = routing.distance(cur) + 1;
          frontier.push_back(s);
          break;
        }
      }
    }
  }
  // Oracle action: lowest-index action stepping one level closer.
  for (int s = 0; s < s_count; ++s) {
    if (s == goal || routing.distance(s) < 0) continue;
    for (int a = 0; a < graph.actions_per_screen; ++a) {
      if (a == graph.terminal_action_index) continue;
      const int next = graph.edges(s, a);
      if (routing.distance(next) == routing.distance(s) - 1) {
        routing.oracle_action(s) = a;
        break;
      }
    }
  }
  return routing;
}

namespace {

struct FamilyTemplate {
  ScreenGraph graph;
  int goal = 0;
  std::vector<int> start_candidates;  // ordered hardest first
};

// Builds one navigation template with planted distances-to-goal: screens
// are assigned levels 0 (the goal) .. depth, and every edge from a level-l
// screen lands on level >= l-1, so BFS distance equals the planted level.
FamilyTemplate make_family(std::uint64_t family_seed, const PoolParams& p) {
  RandomStream rng(family_seed);
  FamilyTemplate fam;
  ScreenGraph& g = fam.graph;
  g.screen_count =
      p.min_screens + rng.below_int(p.max_screens - p.min_screens + 1);
  g.actions_per_screen = p.actions;
  g.terminal_action_index = rng.below_int(p.actions);
  g.edges = IntMatrix::Constant(g.screen_count, g.actions_per_screen, -1);

  const int depth = std::min(p.max_goal_distance, g.screen_count - 1);
  std::vector<int> order(g.screen_count);
  std::iota(order.begin(), order.end(), 0);
  for (int i = g.screen_count - 1; i > 0; --i) {
    std::swap(order[i], order[rng.below_int(i + 1)]);
  }
  fam.goal = order[0];
  std::vector<int> level(g.screen_count, 0);
  std::vector<std::vector<int>> by_level(depth + 1);
  by_level[0].push_back(fam.goal);
  for (int i = 1; i < g.screen_count; ++i) {
    const int lv = 1 + (i - 1) % depth;
    level[order[i]] = lv;
    by_level[lv].push_back(order[i]);
  }

  for (int s = 0; s < g.screen_count; ++s) {
    const int lv = level[s];
    // Screens one level closer, reachable without shortening the planted
    // distance; the goal screen may lead anywhere.
    std::vector<int> closer;
    std::vector<int> allowed;
    for (int t = 0; t < g.screen_count; ++t) {
      if (lv >= 1 && level[t] == lv - 1) closer.push_back(t);
      if (lv == 0 || level[t] >= lv - 1) allowed.push_back(t);
    }
    const int oracle_slot =
        lv >= 1 ? rng.below_int(g.actions_per_screen - 1) : -1;
    int non_terminal_slot = 0;
    for (int a = 0; a < g.actions_per_screen; ++a) {
      if (a == g.terminal_action_index) continue;
      if (non_terminal_slot == oracle_slot) {
        g.edges(s, a) = closer[rng.below_int(static_cast<int>(closer.size()))];
      } else {
        g.edges(s, a) = allowed[rng.below_int(static_cast<int>(allowed.size()))];
      }
      ++non_terminal_slot;
    }
  }

  const GoalRouting routing = route_to_goal(g, fam.goal);
  for (int want = depth; want >= p.min_goal_distance; --want) {
    for (int s = 0; s < g.screen_count; ++s) {
      if (routing.distance(s) == want) fam.start_candidates.push_back(s);
    }
  }
  return fam;
}

}  // namespace

int TaskPool::family_count() const { return params.families; }

int TaskPool::family_screens(int family) const {
  for (const TaskSpec& t : tasks) {
    if (t.family == family) return t.graph.screen_count;
  }
  throw ContractError("family has no tasks in pool");
}

TaskPool generate_task_pool(std::uint64_t pool_seed, int count,
                            const PoolParams& params) {
  if (count < 1) throw ConfigError("task pool count must be >= 1");
  params.validate();

  TaskPool pool;
  pool.params = params;

  std::vector<FamilyTemplate> families;
  families.reserve(params.families);
  for (int f = 0; f < params.families; ++f) {
    families.push_back(make_family(derive_seed(pool_seed, 0x11u, f), params));
    if (families.back().start_candidates.empty()) {
      throw ConfigError("family has no start screen in the goal distance range");
    }
  }

  std::vector<int> start_cursor(params.families, 0);
  pool.tasks.reserve(count);
  for (int i = 0; i < count; ++i) {
    const int f = i % params.families;
    const FamilyTemplate& fam = families[f];
    TaskSpec task;
    task.task_id = i;
    task.family = f;
    task.graph = fam.graph;
    task.goal_screen = fam.goal;
    task.start_screen =
        fam.start_candidates[start_cursor[f] % fam.start_candidates.size()];
    ++start_cursor[f];
    task.max_steps = params.max_steps;
    task.seed = derive_seed(pool_seed, 0x22u, i);
    task.validate();
    pool.tasks.push_back(std::move(task));
  }
  return pool;
}

std::string pool_to_json(const TaskPool& pool) {
  nlohmann::json tasks = nlohmann::json::array();
  for (const TaskSpec& t : pool.tasks) {
    nlohmann::json edges = nlohmann::json::array();
    for (int s = 0; s < t.graph.screen_count; ++s) {
      for (int a = 0; a < t.graph.actions_per_screen; ++a) {
        if (a == t.graph.terminal_action_index) continue;
        edges.push_back({s, a, t.graph.edges(s, a)});
      }
    }
    tasks.push_back({{"task_id", t.task_id},
                     {"family", t.family},
                     {"start_screen", t.start_screen},
                     {"goal_screen", t.goal_screen},
                     {"max_steps", t.max_steps},
                     {"seed", t.seed},
                     {"graph",
                      {{"screens", t.graph.screen_count},
                       {"actions_per_screen", t.graph.actions_per_screen},
                       {"terminal_action_index", t.graph.terminal_action_index},
                       {"edges", edges}}}});
  }
  nlohmann::json doc = {{"schema", 1},
                        {"params",
                         {{"families", pool.params.families},
                          {"min_screens", pool.params.min_screens},
                          {"max_screens", pool.params.max_screens},
                          {"actions", pool.params.actions},
                          {"max_steps", pool.params.max_steps},
                          {"min_goal_distance", pool.params.min_goal_distance},
                          {"max_goal_distance", pool.params.max_goal_distance}}},
                        {"tasks", tasks}};
  return doc.dump(2) + "\n";
}

TaskPool pool_from_json(const std::string& text) {
  const nlohmann::json doc = nlohmann::json::parse(text);
  TaskPool pool;
  const auto& p = doc.at("params");
  pool.params.families = p.at("families").get<int>();
  pool.params.min_screens = p.at("min_screens").get<int>();
  pool.params.max_screens = p.at("max_screens").get<int>();
  pool.params.actions = p.at("actions").get<int>();
  pool.params.max_steps = p.at("max_steps").get<int>();
  pool.params.min_goal_distance = p.at("min_goal_distance").get<int>();
  pool.params.max_goal_distance = p.at("max_goal_distance").get<int>();
  for (const auto& jt : doc.at("tasks")) {
    TaskSpec t;
    t.task_id = jt.at("task_id").get<std::int64_t>();
    t.family = jt.at("family").get<int>();
    t.start_screen = jt.at("start_screen").get<int>();
    t.goal_screen = jt.at("goal_screen").get<int>();
    t.max_steps = jt.at("max_steps").get<int>();
    t.seed = jt.at("seed").get<std::uint64_t>();
    const auto& jg = jt.at("graph");
    t.graph.screen_count = jg.at("screens").get<int>();
    t.graph.actions_per_screen = jg.at("actions_per_screen").get<int>();
    t.graph.terminal_action_index = jg.at("terminal_action_index").get<int>();
    t.graph.edges =
        IntMatrix::Constant(t.graph.screen_count, t.graph.actions_per_screen, -1);
    for (const auto& je : jg.at("edges")) {
      t.graph.edges(je.at(0).get<int>(), je.at(1).get<int>()) = je.at(2).get<int>();
    }
    t.validate();
    pool.tasks.push_back(std::move(t));
  }
  return pool;
}

}  // namespace ssma
