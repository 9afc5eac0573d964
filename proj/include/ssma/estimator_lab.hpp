#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ssma/advantage.hpp"
#include "ssma/types.hpp"

namespace ssma {

/// Discrete bandit with exact action probabilities and exact Q values.
/// The ground truth against which the gradient estimators are checked.
struct BanditOracle {
  Vector probs;
  Vector q;

  int arms() const { return static_cast<int>(probs.size()); }
  void validate() const;
};

BanditOracle random_oracle(std::uint64_t seed, int min_arms, int max_arms);

/// Closed-form policy gradient over the softmax logits:
///   dJ/dz_a = pi_a (Q_a - J) with J = sum_b pi_b Q_b.
Vector exact_gradient(const BanditOracle& oracle);

struct GradientStats {
  Vector mean;      // per-coordinate MC mean of the estimator
  Vector variance;  // per-coordinate sample variance
  std::int64_t samples = 0;
};

/// Monte-Carlo mean/variance of the single-sample policy-gradient
/// estimator g = A * grad log pi(a). For acloo, each draw samples a group
/// of k actions and evaluates the estimator for the first group member.
/// The sample loop is split into fixed-size shards with per-shard seeds,
/// merged in shard order, so results do not depend on worker count.
GradientStats gradient_stats(EstimatorKind estimator, const BanditOracle& oracle,
                             int k, std::int64_t num_samples, std::uint64_t seed,
                             int worker_count = 1);

struct LabRow {
  EstimatorKind estimator;
  int oracle_id = 0;
  int k = 0;
  std::int64_t samples = 0;
  Real bias_norm = 0.0;
  Real mean_variance = 0.0;
  Real max_z = 0.0;  // max per-coordinate |mean - exact| / SE
  bool pass = false;
};

struct LabConfig {
  int oracle_count = 20;
  int min_arms = 2;
  int max_arms = 8;
  std::vector<int> k_values = {2, 4, 8};
  std::int64_t samples = 100000;
  std::uint64_t seed = 20240917;
  int worker_count = 1;
};

struct LabReport {
  std::vector<LabRow> rows;
  bool unbiasedness_pass = false;      // all rows within 3 SE per coordinate
  bool shift_invariance_pass = false;  // shift-invariance battery on random groups
  bool variance_ordering_pass = false; // aggregate acloo var < no-baseline var
  Real acloo_mean_variance = 0.0;
  Real no_baseline_mean_variance = 0.0;

  bool all_pass() const {
    return unbiasedness_pass && shift_invariance_pass && variance_ordering_pass;
  }
};

/// Runs the unbiasedness, shift-invariance and variance checks across
/// estimators, oracles and k.
LabReport run_estimator_lab(const LabConfig& config);

std::string lab_rows_to_csv(const std::vector<LabRow>& rows);

}  // namespace ssma
