#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ssma/types.hpp"

namespace ssma {

/// One row of training metrics. The CSV column order is exactly the
/// field order here; see docs in the README (schema version 1, recorded
/// in the run manifest).
struct TrainerMetricsRow {
  std::int64_t iteration = 0;
  Real total_time = 0.0;
  Real env_time = 0.0;
  Real inference_time = 0.0;
  Real update_time = 0.0;
  std::int64_t interaction_count = 0;
  std::int64_t sampled_action_count = 0;
  Real mean_outcome_reward = 0.0;
  Real eval_success_rate = 0.0;
  Real mean_critic_loss = 0.0;
  Real mean_actor_loss = 0.0;
};

inline constexpr int kMetricsSchemaVersion = 1;

std::string metrics_csv_header();
std::string metrics_csv_row(const TrainerMetricsRow& row);
std::string metrics_to_csv(const std::vector<TrainerMetricsRow>& rows);

}  // namespace ssma
