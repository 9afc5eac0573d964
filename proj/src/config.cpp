#include "ssma/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <map>
#include <sstream>
#include <thread>

#include "ssma/serialize.hpp"

namespace ssma {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t consumed = 0;
    const std::int64_t v = std::stoll(value, &consumed);
    if (consumed != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "' expects an integer, got '" + value + "'");
  }
}

std::uint64_t parse_uint(const std::string& key, const std::string& value) {
  try {
    std::size_t consumed = 0;
    const std::uint64_t v = std::stoull(value, &consumed);
    if (consumed != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "' expects an unsigned integer, got '" +
                      value + "'");
  }
}

Real parse_real(const std::string& key, const std::string& value) {
  try {
    std::size_t consumed = 0;
    const Real v = std::stod(value, &consumed);
    if (consumed != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "' expects a number, got '" + value + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("key '" + key + "' expects true/false, got '" + value + "'");
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream stream(value);
  std::string item;
  while (std::getline(stream, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct SchemaEntry {
  const char* key;
  const char* type;
  const char* default_text;
  std::function<void(RunConfig&, const std::string&, const std::string&)> apply;
};

const std::vector<SchemaEntry>& schema() {
  static const std::vector<SchemaEntry> entries = {
      {"method", "enum", "android_coach",
       [](RunConfig& c, const std::string&, const std::string& v) {
         c.method = method_from_name(v);
       }},
      {"out_dir", "string", "runs/out",
       [](RunConfig& c, const std::string&, const std::string& v) { c.out_dir = v; }},
      {"seeds", "int list", "1,2,3,4,5",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.seeds.clear();
         for (const std::string& item : split_list(v)) {
           c.seeds.push_back(parse_uint(k, item));
         }
         if (c.seeds.empty()) throw ConfigError("key 'seeds' needs at least one seed");
       }},
      {"workers", "int", "0",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.workers = static_cast<int>(parse_int(k, v));
       }},

      {"train.batch_size", "int", "8",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.train.batch_size = static_cast<int>(parse_int(k, v));
       }},
      {"train.k", "int", "4",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.train.k = static_cast<int>(parse_int(k, v));
       }},
      {"train.grpo_group_size", "int", "4",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.train.grpo_group_size = static_cast<int>(parse_int(k, v));
       }},
      {"train.clip_ratio", "real", "0.2",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.train.clip_ratio = parse_real(k, v);
       }},
      {"train.value_clip", "real", "0.5",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.train.value_clip = parse_real(k, v);
       }},
      {"train.actor_lr", "real", "0.05",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.train.actor_lr = parse_real(k, v);
       }},
      {"train.critic_lr", "real", "0.1",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.train.critic_lr = parse_real(k, v);
       }},
      {"train.grad_clip_norm", "real", "1.0",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.train.grad_clip_norm = parse_real(k, v);
       }},
      {"train.optimizer", "enum", "sgd",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         if (v == "sgd") c.train.optimizer = OptimizerMode::sgd;
         else if (v == "adam") c.train.optimizer = OptimizerMode::adam;
         else throw ConfigError("key '" + k + "' expects sgd|adam, got '" + v + "'");
       }},
      {"train.critic_init", "enum", "prm_pretrain",
       [](RunConfig& c, const std::string&, const std::string& v) {
         c.train.critic_init = critic_init_from_name(v);
       }},
      {"train.critic_epochs", "int", "1",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.train.critic_epochs = static_cast<int>(parse_int(k, v));
       }},
      {"train.actor_epochs", "int", "1",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.train.actor_epochs = static_cast<int>(parse_int(k, v));
       }},
      {"train.warmup_iterations", "int", "5",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.train.warmup_iterations = static_cast<int>(parse_int(k, v));
       }},
      {"train.temperature", "real", "1.0",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.train.temperature = parse_real(k, v);
       }},
      {"train.max_iterations", "int", "400",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.train.max_iterations = parse_int(k, v);
       }},
      {"train.time_budget", "real", "0",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.train.time_budget = parse_real(k, v);
       }},
      {"train.include_executed", "bool", "false",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.train.include_executed = parse_bool(k, v);
       }},
      {"train.normalize_advantages", "bool", "false",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.train.normalize_advantages = parse_bool(k, v);
       }},
      {"train.charge_resample_inference", "bool", "true",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.train.charge_resample_inference = parse_bool(k, v);
       }},
      {"train.ppo_use_prm", "bool", "false",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.train.ppo_use_prm = parse_bool(k, v);
       }},
      {"train.grpo_sample_std", "bool", "false",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.train.grpo_sample_std = parse_bool(k, v);
       }},
      {"train.grpo_std_floor", "real", "1e-4",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.train.grpo_std_floor = parse_real(k, v);
       }},
      {"train.eval_every", "int", "1",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.train.eval_every = static_cast<int>(parse_int(k, v));
       }},
      {"train.eval_episodes_per_task", "int", "1",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.train.eval_episodes_per_task = static_cast<int>(parse_int(k, v));
       }},
      {"train.target_sr", "real", "0.8",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.train.target_success_rate = parse_real(k, v);
       }},
      {"train.save_trajectories", "bool", "false",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.save_trajectories = parse_bool(k, v);
       }},

      {"reward.omega_p", "real", "0.2",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.train.reward.omega_p = parse_real(k, v);
       }},
      {"reward.omega_o", "real", "1.0",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.train.reward.omega_o = parse_real(k, v);
       }},
      {"reward.gamma", "real", "0.95",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.train.reward.gamma = parse_real(k, v);
       }},
      {"reward.discount_mode", "enum", "as_written",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         if (v == "as_written") c.train.reward.discount_mode = DiscountMode::as_written;
         else if (v == "standard") c.train.reward.discount_mode = DiscountMode::standard;
         else throw ConfigError("key '" + k + "' expects as_written|standard");
       }},
      {"reward.prm_threshold", "real", "0.5",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.train.reward.prm_threshold = parse_real(k, v);
       }},
      {"reward.prm_noise_rate", "real", "0.05",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.train.reward.prm_noise_rate = parse_real(k, v);
       }},

      {"prm.samples_per_state", "int", "8",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.train.prm_samples_per_state = static_cast<int>(parse_int(k, v));
       }},
      {"prm.epochs", "int", "2",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.train.prm_train.epochs = static_cast<int>(parse_int(k, v));
       }},
      {"prm.batch_size", "int", "32",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.train.prm_train.batch_size = static_cast<int>(parse_int(k, v));
       }},
      {"prm.lr", "real", "8.0",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.train.prm_train.learning_rate = parse_real(k, v);
       }},
      {"prm.holdout_fraction", "real", "0.2",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.train.prm_train.holdout_fraction = parse_real(k, v);
       }},
      {"prm.pretrain_epochs", "int", "4",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.train.critic_pretrain.epochs = static_cast<int>(parse_int(k, v));
       }},
      {"prm.pretrain_lr", "real", "4.0",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.train.critic_pretrain.learning_rate = parse_real(k, v);
       }},

      {"pool.seed", "uint", "42",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.pool_seed = parse_uint(k, v);
       }},
      {"pool.count", "int", "60",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.pool_count = static_cast<int>(parse_int(k, v));
       }},
      {"pool.eval_count", "int", "20",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.pool_eval_count = static_cast<int>(parse_int(k, v));
       }},
      {"pool.families", "int", "10",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.pool_params.families = static_cast<int>(parse_int(k, v));
       }},
      {"pool.min_screens", "int", "4",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.pool_params.min_screens = static_cast<int>(parse_int(k, v));
       }},
      {"pool.max_screens", "int", "8",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.pool_params.max_screens = static_cast<int>(parse_int(k, v));
       }},
      {"pool.actions", "int", "6",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.pool_params.actions = static_cast<int>(parse_int(k, v));
       }},
      {"pool.max_steps", "int", "25",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.pool_params.max_steps = static_cast<int>(parse_int(k, v));
       }},
      {"pool.min_goal_distance", "int", "1",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.pool_params.min_goal_distance = static_cast<int>(parse_int(k, v));
       }},
      {"pool.max_goal_distance", "int", "3",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.pool_params.max_goal_distance = static_cast<int>(parse_int(k, v));
       }},

      {"latency.init_cost", "real", "20.0",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.latency.init_cost = parse_real(k, v);
       }},
      {"latency.step_cost", "real", "2.5",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.latency.step_cost = parse_real(k, v);
       }},
      {"latency.recovery_cost", "real", "10.0",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.latency.recovery_cost = parse_real(k, v);
       }},
      {"latency.inference_cost", "real", "4.6",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.latency.inference_cost = parse_real(k, v);
       }},
      {"latency.update_cost", "real", "0.0",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.latency.update_cost = parse_real(k, v);
       }},

      {"compare.methods", "enum list", "android_coach,ppo,grpo",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.compare_methods_list.clear();
         for (const std::string& item : split_list(v)) {
           c.compare_methods_list.push_back(method_from_name(item));
         }
         if (c.compare_methods_list.empty()) {
           throw ConfigError("key '" + k + "' needs at least one method");
         }
       }},
      {"compare.time_budget", "real", "400000",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.compare_time_budget = parse_real(k, v);
       }},

      {"lab.oracles", "int", "20",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.lab.oracle_count = static_cast<int>(parse_int(k, v));
       }},
      {"lab.min_arms", "int", "2",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.lab.min_arms = static_cast<int>(parse_int(k, v));
       }},
      {"lab.max_arms", "int", "8",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.lab.max_arms = static_cast<int>(parse_int(k, v));
       }},
      {"lab.k_values", "int list", "2,4,8",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.lab.k_values.clear();
         for (const std::string& item : split_list(v)) {
           c.lab.k_values.push_back(static_cast<int>(parse_int(k, item)));
         }
       }},
      {"lab.samples", "int", "100000",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.lab.samples = parse_int(k, v);
       }},
      {"lab.seed", "uint", "20240917",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.lab.seed = parse_uint(k, v);
       }},

      {"eval.checkpoint", "string", "",
       [](RunConfig& c, const std::string&, const std::string& v) {
         c.eval_checkpoint = v;
       }},
  };
  return entries;
}

}  // namespace

void RunConfig::validate() const {
  train.validate();
  latency.validate();
  pool_params.validate();
  if (pool_count < 1) throw ConfigError("pool.count must be >= 1");
  if (pool_eval_count < 1) throw ConfigError("pool.eval_count must be >= 1");
  if (workers < 0) throw ConfigError("workers must be >= 0");
  if (seeds.empty()) throw ConfigError("at least one seed is required");
  if (compare_time_budget < 0) {
    throw ConfigError("compare.time_budget must be >= 0");
  }
  if (lab.samples < 1000) throw ConfigError("lab.samples must be >= 1000");
}

TrainConfig RunConfig::to_train_config(Method m) const {
  TrainConfig out = train;
  out.method = m;
  return out;
}

RunConfig parse_config_text(const std::string& text) {
  std::map<std::string, const SchemaEntry*> by_key;
  for (const SchemaEntry& entry : schema()) by_key[entry.key] = &entry;

  RunConfig config;
  std::istringstream stream(text);
  std::string line;
  int line_number = 0;
  while (std::getline(stream, line)) {
    ++line_number;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_number) +
                        ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = by_key.find(key);
    if (it == by_key.end()) {
      throw ConfigError("unknown configuration key '" + key + "' (line " +
                        std::to_string(line_number) + ")");
    }
    it->second->apply(config, key, value);
  }
  config.validate();
  return config;
}

RunConfig load_config_file(const std::string& path) {
  return parse_config_text(read_file(path));
}

std::string config_schema_help() {
  std::ostringstream out;
  out << "# Configuration schema: key = value, '#' comments, unknown keys are errors.\n";
  for (const SchemaEntry& entry : schema()) {
    out << entry.key << " = " << entry.default_text << "  # " << entry.type << "\n";
  }
  return out.str();
}

int resolve_worker_count(const RunConfig& config) {
  int workers = config.workers;
  if (workers <= 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    workers = std::max(1, std::min<int>(config.train.batch_size,
                                        hw == 0 ? 1 : static_cast<int>(hw)));
  }
  if (const char* env = std::getenv("SSMA_RL_THREADS")) {
    try {
      const int cap = std::stoi(env);
      if (cap >= 1) workers = std::min(workers, cap);
    } catch (const std::exception&) {
      throw ConfigError("SSMA_RL_THREADS must be an integer");
    }
  }
  return workers;
}

}  // namespace ssma
