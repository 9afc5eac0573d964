#include "ssma/commands.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <filesystem>
#include <iostream>

#include <nlohmann/json.hpp>

#include "ssma/config.hpp"
#include "ssma/serialize.hpp"
#include "ssma/svg_chart.hpp"
#include "ssma/trainer.hpp"

namespace ssma {

const char* kVersionString = "ssma-rl 0.1.0";

namespace {

namespace fs = std::filesystem;

/// Exclusive ownership of an output directory for the duration of a run.
class DirLock {
 public:
  explicit DirLock(const fs::path& dir) : path_(dir / ".ssma_lock") {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory: " + dir.string());
    fd_ = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd_ < 0) {
      throw IoError("output directory is locked by another run (" +
                    path_.string() + " exists); use a distinct --out");
    }
  }
  ~DirLock() {
    if (fd_ >= 0) {
      ::close(fd_);
      ::unlink(path_.c_str());
    }
  }
  DirLock(const DirLock&) = delete;
  DirLock& operator=(const DirLock&) = delete;

 private:
  fs::path path_;
  int fd_ = -1;
};

struct LoadedRun {
  RunConfig config;
  std::string config_text;
  fs::path out;
  int workers = 1;
};

LoadedRun load_run(const CliOptions& options) {
  LoadedRun run;
  run.config_text = read_file(options.config_path);
  run.config = parse_config_text(run.config_text);
  if (options.out_dir) run.config.out_dir = *options.out_dir;
  if (options.seed) run.config.seeds = {*options.seed};
  run.out = run.config.out_dir;
  run.workers = resolve_worker_count(run.config);
  return run;
}

struct Pools {
  TaskPool train;
  TaskPool eval;
  std::string pool_hash;
};

/// One generator call covers train + eval so both share families while
/// task ids stay disjoint.
Pools build_pools(const RunConfig& config) {
  const TaskPool full =
      generate_task_pool(config.pool_seed,
                         config.pool_count + config.pool_eval_count,
                         config.pool_params);
  Pools pools;
  pools.train.params = full.params;
  pools.eval.params = full.params;
  pools.train.tasks.assign(full.tasks.begin(),
                           full.tasks.begin() + config.pool_count);
  pools.eval.tasks.assign(full.tasks.begin() + config.pool_count,
                          full.tasks.end());
  pools.pool_hash = hash_hex(pool_to_json(full));
  return pools;
}

nlohmann::json manifest_json(const LoadedRun& run, const std::string& pool_hash,
                             const std::string& command) {
  nlohmann::json seeds = nlohmann::json::array();
  for (const std::uint64_t s : run.config.seeds) seeds.push_back(s);
  return nlohmann::json{{"version", kVersionString},
                        {"command", command},
                        {"config_hash", hash_hex(run.config_text)},
                        {"pool_hash", pool_hash},
                        {"seeds", seeds},
                        {"csv_schema_version", kMetricsSchemaVersion}};
}

void write_text(const fs::path& path, const std::string& text) {
  write_file(path, text);
}

nlohmann::json optimizer_json(const OptimizerState& opt) {
  return {{"learning_rate", opt.learning_rate},
          {"grad_clip_norm", opt.grad_clip_norm},
          {"step_count", opt.step_count},
          {"mode", opt.mode == OptimizerMode::adam ? "adam" : "sgd"}};
}

void save_checkpoint(const fs::path& dir, const Trainer& trainer) {
  write_file(dir / "policy.bin", matrix_to_bytes(trainer.policy().weights));
  write_file(dir / "policy.bin.opt.json",
             optimizer_json(trainer.actor_optimizer()).dump(2) + "\n");
  write_file(dir / "critic.bin", matrix_to_bytes(trainer.critic().weights));
  write_file(dir / "critic.bin.opt.json",
             optimizer_json(trainer.critic_optimizer()).dump(2) + "\n");
  Matrix prm(trainer.prm().weights.rows(), trainer.prm().weights.cols() + 1);
  prm << trainer.prm().weights, trainer.prm().bias;
  write_file(dir / "prm.bin", matrix_to_bytes(prm));
  write_file(dir / "value.bin",
             matrix_to_bytes(trainer.state_value().transpose()));

  const SimClock& clock = trainer.clock();
  const nlohmann::json state = {
      {"iteration", trainer.iteration()},
      {"clock",
       {{"env_time", clock.env_time()},
        {"inference_time", clock.inference_time()},
        {"update_time", clock.update_time()},
        {"interaction_count", clock.interaction_count()},
        {"sampled_action_count", clock.sampled_action_count()}}},
      {"rng", {{"scheme", "per-iteration streams derived from (seed, iteration)"}}},
      {"prm_holdout_accuracy", trainer.prm_holdout_accuracy()}};
  write_text(dir / "trainer_state.json", state.dump(2) + "\n");
}

std::string method_color(Method method) {
  switch (method) {
    case Method::android_coach: return "#c0392b";
    case Method::ppo: return "#2471a3";
    case Method::grpo: return "#1e8449";
  }
  return "#555555";
}

}  // namespace

int cmd_train(const CliOptions& options) {
  const LoadedRun run = load_run(options);
  DirLock lock(run.out);
  const Pools pools = build_pools(run.config);

  write_text(run.out / "config.txt", run.config_text);
  write_text(run.out / "pool.json", pool_to_json(pools.train));
  write_text(run.out / "manifest.json",
             manifest_json(run, pools.pool_hash, "train").dump(2) + "\n");

  for (const std::uint64_t seed : run.config.seeds) {
    const fs::path seed_dir = run.out / ("seed_" + std::to_string(seed));
    std::error_code ec;
    fs::create_directories(seed_dir, ec);
    if (ec) throw IoError("cannot create " + seed_dir.string());

    Trainer trainer(run.config.to_train_config(run.config.method), pools.train,
                    pools.eval, run.config.latency, seed, run.workers);
    const std::vector<TrainerMetricsRow> rows = trainer.run();
    write_text(seed_dir / "metrics.csv", metrics_to_csv(rows));
    save_checkpoint(seed_dir, trainer);
    if (run.config.save_trajectories) {
      write_text(seed_dir / "trajectories.jsonl",
                 trajectories_to_jsonl(trainer.last_trajectories()));
    }
    if (!options.quiet) {
      std::cout << "seed " << seed << ": " << rows.size() << " iterations, "
                << "final eval SR "
                << (rows.empty() ? 0.0 : rows.back().eval_success_rate)
                << ", simulated time "
                << (rows.empty() ? 0.0 : rows.back().total_time) << "\n";
    }
  }
  return 0;
}

int cmd_compare(const CliOptions& options) {
  const LoadedRun run = load_run(options);
  if (run.config.compare_methods_list.size() < 2) {
    throw ConfigError("compare needs at least 2 methods in compare.methods");
  }
  DirLock lock(run.out);
  const Pools pools = build_pools(run.config);

  write_text(run.out / "config.txt", run.config_text);
  write_text(run.out / "pool.json", pool_to_json(pools.train));
  write_text(run.out / "manifest.json",
             manifest_json(run, pools.pool_hash, "compare").dump(2) + "\n");

  std::vector<TrainConfig> configs;
  for (const Method method : run.config.compare_methods_list) {
    configs.push_back(run.config.to_train_config(method));
  }
  const CompareReport report =
      compare_methods(configs, pools.train, pools.eval, run.config.latency,
                      run.config.compare_time_budget, run.config.seeds,
                      run.workers);

  nlohmann::json methods_json;
  for (const MethodSummary& summary : report.methods) {
    const fs::path method_dir = run.out / method_name(summary.method);
    nlohmann::json per_seed = nlohmann::json::array();
    for (const MethodRunResult& result : summary.runs) {
      const fs::path seed_dir =
          method_dir / ("seed_" + std::to_string(result.seed));
      std::error_code ec;
      fs::create_directories(seed_dir, ec);
      if (ec) throw IoError("cannot create " + seed_dir.string());
      write_text(seed_dir / "metrics.csv", metrics_to_csv(result.rows));
      nlohmann::json entry = {{"seed", result.seed},
                              {"final_eval_sr", result.final_eval_sr},
                              {"iterations", result.rows.size()}};
      if (result.time_to_target) {
        entry["time_to_target"] = *result.time_to_target;
      } else {
        entry["time_to_target"] = nullptr;
        entry["censor_reason"] = "budget_exhausted";
      }
      per_seed.push_back(entry);
    }
    methods_json[method_name(summary.method)] = {
        {"median_time_to_target", summary.median_time_to_target},
        {"censored_runs", summary.censored},
        {"per_seed", per_seed}};
  }

  nlohmann::json ratios;
  const Method reference = run.config.compare_methods_list.front();
  for (const MethodSummary& summary : report.methods) {
    if (summary.method == reference) continue;
    const std::string key = std::string(method_name(summary.method)) + "_over_" +
                            method_name(reference);
    const MethodSummary& ref = report.summary(reference);
    const bool ref_reached = ref.censored < static_cast<int>(ref.runs.size());
    if (!ref_reached) {
      ratios[key] = {{"median_ratio", nullptr}, {"reason", "budget_exhausted"}};
    } else {
      ratios[key] = {
          {"median_ratio",
           summary.median_time_to_target / ref.median_time_to_target},
          {"baseline_censored_runs", summary.censored}};
    }
  }

  const nlohmann::json summary_json = {{"target_sr", report.target_sr},
                                       {"time_budget", report.time_budget},
                                       {"pool_hash", pools.pool_hash},
                                       {"methods", methods_json},
                                       {"efficiency_ratios", ratios}};
  write_text(run.out / "summary.json", summary_json.dump(2) + "\n");

  // Comparison charts: SR, interactions and sampled actions over time.
  const fs::path chart_dir = run.out / "charts";
  std::error_code ec;
  fs::create_directories(chart_dir, ec);
  if (ec) throw IoError("cannot create " + chart_dir.string());
  const std::vector<std::pair<std::string, std::string>> chart_defs = {
      {"eval_success_rate", "sr_vs_time"},
      {"interaction_count", "interactions_vs_time"},
      {"sampled_action_count", "samples_vs_time"}};
  for (const auto& [metric, file_stem] : chart_defs) {
    ChartSpec spec;
    spec.title = metric + std::string(" vs simulated time");
    spec.x_metric = "total_time";
    spec.y_metric = metric;
    for (const MethodSummary& summary : report.methods) {
      std::vector<std::vector<TrainerMetricsRow>> runs_rows;
      for (const MethodRunResult& result : summary.runs) {
        runs_rows.push_back(result.rows);
      }
      spec.series.push_back(aggregate_series(
          method_name(summary.method), method_color(summary.method), runs_rows,
          "total_time", metric, run.config.compare_time_budget));
    }
    write_text(chart_dir / (file_stem + ".svg"), render_line_chart(spec));
  }

  if (!options.quiet) {
    for (const MethodSummary& summary : report.methods) {
      std::cout << method_name(summary.method) << ": median time to SR "
                << report.target_sr << " = " << summary.median_time_to_target
                << " (" << summary.censored << " censored)\n";
    }
  }
  return 0;
}

int cmd_estimator_lab(const CliOptions& options) {
  const LoadedRun run = load_run(options);
  DirLock lock(run.out);
  LabConfig lab = run.config.lab;
  lab.worker_count = run.workers;
  const LabReport report = run_estimator_lab(lab);

  write_text(run.out / "estimator_lab.csv", lab_rows_to_csv(report.rows));
  const nlohmann::json summary = {
      {"unbiasedness_pass", report.unbiasedness_pass},
      {"shift_invariance_pass", report.shift_invariance_pass},
      {"variance_ordering_pass", report.variance_ordering_pass},
      {"acloo_mean_variance", report.acloo_mean_variance},
      {"no_baseline_mean_variance", report.no_baseline_mean_variance},
      {"rows", report.rows.size()}};
  write_text(run.out / "lab_summary.json", summary.dump(2) + "\n");

  if (!options.quiet) {
    std::cout << "unbiasedness: " << (report.unbiasedness_pass ? "pass" : "FAIL")
              << "\nshift invariance: "
              << (report.shift_invariance_pass ? "pass" : "FAIL")
              << "\nvariance ordering (acloo < no-baseline): "
              << (report.variance_ordering_pass ? "pass" : "FAIL") << "\n";
  }
  return report.all_pass() ? 0 : 4;
}

int cmd_prm(const CliOptions& options) {
  const LoadedRun run = load_run(options);
  DirLock lock(run.out);
  const Pools pools = build_pools(run.config);
  const std::uint64_t seed = run.config.seeds.front();

  TaskPool combined = pools.train;
  combined.tasks.insert(combined.tasks.end(), pools.eval.tasks.begin(),
                        pools.eval.tasks.end());
  const FeatureMap features(combined);
  const PolicyParams policy =
      make_policy(pools.train.params.actions, features.dimension());

  const PrmDataset dataset =
      build_prm_dataset(pools.train, policy, features,
                        run.config.train.prm_samples_per_state,
                        derive_seed(seed, 0x707264u));
  if (dataset.degenerate) {
    std::cerr << "warning: dataset collapsed to a single class\n";
  }
  PrmTrainOptions prm_options = run.config.train.prm_train;
  prm_options.seed = derive_seed(seed, 0x70726du);
  const PrmTrainReport report =
      train_prm(dataset.records, pools.train.params.actions,
                features.dimension(), prm_options);

  write_text(run.out / "config.txt", run.config_text);
  write_text(run.out / "manifest.json",
             manifest_json(run, pools.pool_hash, "prm").dump(2) + "\n");
  write_text(run.out / "prm_dataset.jsonl", prm_dataset_to_jsonl(dataset.records));
  Matrix prm(report.params.weights.rows(), report.params.weights.cols() + 1);
  prm << report.params.weights, report.params.bias;
  write_file(run.out / "prm.bin", matrix_to_bytes(prm));
  const nlohmann::json report_json = {
      {"holdout_accuracy", report.holdout_accuracy},
      {"train_records", report.train_records},
      {"holdout_records", report.holdout_records},
      {"final_train_loss", report.final_train_loss}};
  write_text(run.out / "prm_report.json", report_json.dump(2) + "\n");

  if (!options.quiet) {
    std::cout << "held-out accuracy: " << report.holdout_accuracy << " ("
              << report.train_records << " train / " << report.holdout_records
              << " held-out records)\n";
  }
  return 0;
}

int run_guarded(int (*command)(const CliOptions&), const CliOptions& options) {
  try {
    return command(options);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  } catch (const DegenerateDatasetError& e) {
    std::cerr << "degenerate dataset: " << e.what() << "\n";
    return 5;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_eval(const CliOptions& options) {
  const LoadedRun run = load_run(options);
  if (run.config.eval_checkpoint.empty()) {
    throw ConfigError("eval requires eval.checkpoint = <policy.bin path>");
  }
  const Pools pools = build_pools(run.config);
  TaskPool combined = pools.train;
  combined.tasks.insert(combined.tasks.end(), pools.eval.tasks.begin(),
                        pools.eval.tasks.end());
  const FeatureMap features(combined);

  const Matrix weights =
      matrix_from_bytes(read_file(run.config.eval_checkpoint));
  if (weights.rows() != pools.train.params.actions ||
      weights.cols() != features.dimension()) {
    throw ConfigError("checkpoint shape does not match the configured pool");
  }
  const Real sr =
      evaluate_policy(weights, pools.eval, features, run.config.latency,
                      run.config.train.eval_episodes_per_task);
  std::cout << "eval success rate: " << sr << "\n";
  return 0;
}

}  // namespace ssma
