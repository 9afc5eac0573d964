#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace ssma {

struct CliOptions {
  std::string config_path;
  std::optional<std::string> out_dir;       // --out override
  std::optional<std::uint64_t> seed;        // --seed override (single seed)
  bool quiet = false;
};

/// Exit codes: 0 success, 1 I/O, 2 invalid config, 3 numeric failure,
/// 4 estimator-check failure, 5 degenerate dataset.
int cmd_train(const CliOptions& options);
int cmd_compare(const CliOptions& options);
int cmd_estimator_lab(const CliOptions& options);
int cmd_prm(const CliOptions& options);
int cmd_eval(const CliOptions& options);

/// Runs a command, mapping thrown errors onto the exit-code contract.
int run_guarded(int (*command)(const CliOptions&), const CliOptions& options);

extern const char* kVersionString;

}  // namespace ssma
