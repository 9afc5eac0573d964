#include <CLI11.hpp>

#include "ssma/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"SSMA-RL: single-state-multiple-actions actor-critic on MiniGUI"};
  app.set_version_flag("--version", ssma::kVersionString);

  ssma::CliOptions options;
  app.add_option("--config", options.config_path, "Configuration file path")
      ->required();
  std::string out_dir;
  std::uint64_t seed = 0;
  auto* out_flag = app.add_option("--out", out_dir, "Output directory override");
  auto* seed_flag =
      app.add_option("--seed", seed, "Seed override (replaces the seed list)");
  app.add_flag("--quiet", options.quiet, "Suppress progress output");

  app.require_subcommand(1);
  auto* train = app.add_subcommand("train", "Run the configured method");
  auto* compare =
      app.add_subcommand("compare", "Run all configured methods to one budget");
  auto* lab = app.add_subcommand("estimator-lab",
                                 "Run the advantage-estimator test battery");
  auto* prm = app.add_subcommand("prm", "Build the step dataset and train the PRM");
  auto* eval = app.add_subcommand("eval", "Evaluate a policy checkpoint");

  CLI11_PARSE(app, argc, argv);
  if (*out_flag) options.out_dir = out_dir;
  if (*seed_flag) options.seed = seed;

  if (train->parsed()) return ssma::run_guarded(ssma::cmd_train, options);
  if (compare->parsed()) return ssma::run_guarded(ssma::cmd_compare, options);
  if (lab->parsed()) return ssma::run_guarded(ssma::cmd_estimator_lab, options);
  if (prm->parsed()) return ssma::run_guarded(ssma::cmd_prm, options);
  if (eval->parsed()) return ssma::run_guarded(ssma::cmd_eval, options);
  return 1;
}
