#include "ssma/metrics.hpp"

#include <sstream>

#include "ssma/serialize.hpp"

namespace ssma {

std::string metrics_csv_header() {
  return "iteration,total_time,env_time,inference_time,update_time,"
         "interaction_count,sampled_action_count,mean_outcome_reward,"
         "eval_success_rate,mean_critic_loss,mean_actor_loss\n";
}

std::string metrics_csv_row(const TrainerMetricsRow& row) {
  std::ostringstream out;
  out << row.iteration << ',' << format_real(row.total_time) << ','
      << format_real(row.env_time) << ',' << format_real(row.inference_time)
      << ',' << format_real(row.update_time) << ',' << row.interaction_count
      << ',' << row.sampled_action_count << ','
      << format_real(row.mean_outcome_reward) << ','
      << format_real(row.eval_success_rate) << ','
      << format_real(row.mean_critic_loss) << ','
      << format_real(row.mean_actor_loss) << '\n';
  return out.str();
}

std::string metrics_to_csv(const std::vector<TrainerMetricsRow>& rows) {
  std::string out = metrics_csv_header();
  for (const TrainerMetricsRow& row : rows) out += metrics_csv_row(row);
  return out;
}

}  // namespace ssma
