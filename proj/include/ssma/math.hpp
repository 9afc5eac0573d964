#pragma once

#include <cmath>

#include "ssma/types.hpp"

namespace ssma {

/// Numerically stable softmax of a logit vector.
template <typename Derived>
VectorX<typename Derived::Scalar> softmax(const Eigen::MatrixBase<Derived>& logits) {
  using Scalar = typename Derived::Scalar;
  const Scalar zmax = logits.maxCoeff();
  VectorX<Scalar> p = (logits.array() - zmax).exp();
  p /= p.sum();
  return p;
}

/// Numerically stable log-softmax of a logit vector.
template <typename Derived>
VectorX<typename Derived::Scalar> log_softmax(const Eigen::MatrixBase<Derived>& logits) {
  using Scalar = typename Derived::Scalar;
  const Scalar zmax = logits.maxCoeff();
  VectorX<Scalar> shifted = logits.array() - zmax;
  const Scalar logsum = std::log(shifted.array().exp().sum());
  return shifted.array() - logsum;
}

template <typename Scalar>
Scalar sigmoid(Scalar z) {
  if (z >= 0) {
    return Scalar(1) / (Scalar(1) + std::exp(-z));
  }
  const Scalar e = std::exp(z);
  return e / (Scalar(1) + e);
}

/// Binary cross-entropy from a logit: softplus(z) - y*z, computed stably.
template <typename Scalar>
Scalar logistic_loss(Scalar logit, Scalar label) {
  const Scalar softplus =
      std::max(logit, Scalar(0)) + std::log1p(std::exp(-std::abs(logit)));
  return softplus - label * logit;
}

}  // namespace ssma
