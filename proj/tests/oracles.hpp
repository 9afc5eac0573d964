// Independent test oracles. Everything here recomputes expected values
// from first principles (finite differences, brute-force summation,
// exact enumeration) without touching the implementation paths under test.
#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "ssma/screen_graph.hpp"
#include "ssma/types.hpp"

namespace ssma::testing {

/// Central finite differences of a scalar function of a matrix.
template <typename F>
Matrix finite_difference(Matrix params, F&& f, Real h = 1e-5) {
  Matrix grad(params.rows(), params.cols());
  for (Eigen::Index r = 0; r < params.rows(); ++r) {
    for (Eigen::Index c = 0; c < params.cols(); ++c) {
      const Real original = params(r, c);
      params(r, c) = original + h;
      const Real plus = f(params);
      params(r, c) = original - h;
      const Real minus = f(params);
      params(r, c) = original;
      grad(r, c) = (plus - minus) / (2 * h);
    }
  }
  return grad;
}

inline Real relative_error(const Matrix& actual, const Matrix& expected) {
  const Real denom = std::max<Real>(1e-12, expected.norm());
  return (actual - expected).norm() / denom;
}

/// Double-loop evaluation of the weighted Monte-Carlo return formula,
/// with std::pow for the discount powers.
inline std::vector<Real> brute_force_returns(const std::vector<int>& r_p,
                                             int r_o, Real omega_p, Real omega_o,
                                             Real gamma, bool as_written) {
  const int n = static_cast<int>(r_p.size());
  std::vector<Real> out(n);
  for (int t = 0; t < n; ++t) {
    Real sum = 0.0;
    for (int tau = t; tau < n; ++tau) {
      const int exponent = as_written ? (n - 1 - tau) : (tau - t);
      sum += std::pow(gamma, exponent) * r_p[tau];
    }
    out[t] = omega_p * sum + omega_o * r_o;
  }
  return out;
}

/// Exact episode success probability for a stochastic per-screen action
/// distribution, by forward dynamic programming over (screen, step).
inline Real exact_success_probability(
    const TaskSpec& task, const std::function<Vector(int)>& screen_probs) {
  const int s_count = task.graph.screen_count;
  const int terminal = task.graph.terminal_action_index;
  std::vector<Real> occupancy(s_count, 0.0);
  occupancy[task.start_screen] = 1.0;
  Real success = 0.0;
  for (int t = 0; t < task.max_steps; ++t) {
    std::vector<Real> next(s_count, 0.0);
    for (int s = 0; s < s_count; ++s) {
      if (occupancy[s] <= 0) continue;
      const Vector probs = screen_probs(s);
      for (int a = 0; a < task.graph.actions_per_screen; ++a) {
        if (a == terminal) {
          if (s == task.goal_screen) success += occupancy[s] * probs(a);
        } else {
          next[task.graph.successor(s, a)] += occupancy[s] * probs(a);
        }
      }
    }
    occupancy = std::move(next);
  }
  return success;
}

/// Leave-one-out advantages via the literal mean-of-others double loop.
inline Vector brute_force_loo(const Vector& q) {
  const int k = static_cast<int>(q.size());
  Vector out(k);
  for (int i = 0; i < k; ++i) {
    Real others = 0.0;
    for (int j = 0; j < k; ++j) {
      if (j != i) others += q(j);
    }
    out(i) = q(i) - others / static_cast<Real>(k - 1);
  }
  return out;
}

/// Deterministic greedy replay: follows argmax actions (ties to lowest
/// index) and reports success, without the env/step machinery.
inline bool greedy_replay_succeeds(const TaskSpec& task,
                                   const std::function<Vector(int)>& logits) {
  int screen = task.start_screen;
  for (int t = 0; t < task.max_steps; ++t) {
    const Vector z = logits(screen);
    int action = 0;
    for (int a = 1; a < z.size(); ++a) {
      if (z(a) > z(action)) action = a;
    }
    if (action == task.graph.terminal_action_index) {
      return screen == task.goal_screen;
    }
    screen = task.graph.successor(screen, action);
  }
  return false;
}

}  // namespace ssma::testing
