#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>

namespace ssma {

using Real = double;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matrix = MatrixX<Real>;
using Vector = VectorX<Real>;
using IntMatrix = MatrixX<int>;
using IntVector = VectorX<int>;

/// Invalid configuration or parameter range (CLI exit code 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Non-finite values where finite ones are required (CLI exit code 3).
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Violated operation precondition (stepping a finished episode,
/// k = 1 leave-one-out group, incomplete trajectory, ...).
struct ContractError : std::logic_error {
  using std::logic_error::logic_error;
};

/// Dataset unusable for training, e.g. a single-class PRM dataset
/// (CLI exit code 5).
struct DegenerateDatasetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Filesystem failure (CLI exit code 1).
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ssma
