#include "ssma/optimizer.hpp"

#include <cmath>

namespace ssma {

void apply_update(Matrix& params, const Matrix& gradient, OptimizerState& opt) {
  if (gradient.rows() != params.rows() || gradient.cols() != params.cols()) {
    throw ContractError("gradient shape mismatch");
  }
  if (!gradient.allFinite()) throw NumericError("non-finite gradient");

  Matrix g = gradient;
  const Real norm = g.norm();
  if (norm > opt.grad_clip_norm) g *= opt.grad_clip_norm / norm;

  ++opt.step_count;
  switch (opt.mode) {
    case OptimizerMode::sgd:
      params -= opt.learning_rate * g;
      break;
    case OptimizerMode::adam: {
      if (opt.m.size() == 0) {
        opt.m = Matrix::Zero(params.rows(), params.cols());
        opt.v = Matrix::Zero(params.rows(), params.cols());
      }
      opt.m = opt.beta1 * opt.m + (1 - opt.beta1) * g;
      opt.v = opt.beta2 * opt.v + (1 - opt.beta2) * g.cwiseProduct(g);
      const Real bc1 = 1 - std::pow(opt.beta1, static_cast<Real>(opt.step_count));
      const Real bc2 = 1 - std::pow(opt.beta2, static_cast<Real>(opt.step_count));
      const Matrix m_hat = opt.m / bc1;
      const Matrix v_hat = opt.v / bc2;
      params -= opt.learning_rate *
                (m_hat.array() / (v_hat.array().sqrt() + opt.epsilon)).matrix();
      break;
    }
  }
}

}  // namespace ssma
