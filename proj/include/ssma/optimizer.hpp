#pragma once

#include <cstdint>

#include "ssma/critic.hpp"
#include "ssma/policy.hpp"
#include "ssma/types.hpp"

namespace ssma {

enum class OptimizerMode { sgd, adam };

struct OptimizerState {
  Real learning_rate = 0.05;
  Real grad_clip_norm = 1.0;
  std::int64_t step_count = 0;
  OptimizerMode mode = OptimizerMode::sgd;
  Real beta1 = 0.9;
  Real beta2 = 0.999;
  Real epsilon = 1e-8;
  Matrix m;  // first/second adam moments, sized on first use
  Matrix v;

  void validate() const {
    if (!(learning_rate >= 0)) throw ConfigError("learning rate must be >= 0");
    if (!(grad_clip_norm > 0)) throw ConfigError("grad clip norm must be > 0");
  }
};

/// Rescales the gradient to global L2 norm <= grad_clip_norm, then takes
/// one descent step. Throws before touching params if the gradient is
/// not finite.
void apply_update(Matrix& params, const Matrix& gradient, OptimizerState& opt);

inline void apply_update(PolicyParams& policy, const Matrix& gradient,
                         OptimizerState& opt) {
  apply_update(policy.weights, gradient, opt);
  ++policy.version;
}

inline void apply_update(CriticParams& critic, const Matrix& gradient,
                         OptimizerState& opt) {
  apply_update(critic.weights, gradient, opt);
  ++critic.version;
}

}  // namespace ssma
