// dsee: batch runner for deterministic-sequencing bandit experiments.
//
//   dsee run <config> [--seed N] [--out DIR] [--strict] [--reps N] [--horizon T] [--threads K]
//   dsee sweep <config> --grid key=v1,v2 [--grid key=v1,v2] [common flags]
//   dsee verify <config> [common flags]

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dsee/cli/commands.hpp"

namespace {

void add_common(CLI::App* cmd, std::string& config, dsee::cli::Overrides& o) {
  cmd->add_option("config", config, "Experiment configuration (YAML)")->required();
  cmd->add_option("--seed", o.seed, "Master seed");
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_flag("--strict", o.strict, "Reject constants outside their validity window (exit 3)");
  cmd->add_option("--reps", o.reps, "Replications (verifier repetitions for verify)");
  cmd->add_option("--horizon", o.horizon, "Horizon T");
  cmd->add_option("--threads", o.threads, "Worker threads (0 = hardware concurrency)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic sequencing of exploration and exploitation: experiment runner"};
  app.require_subcommand(1);

  std::string config;
  dsee::cli::Overrides o;
  std::vector<std::string> grid;

  auto* run = app.add_subcommand("run", "Regret curves for every policy in the config");
  add_common(run, config, o);
  auto* sweep = app.add_subcommand("sweep", "Regret curves over a one- or two-axis parameter grid");
  add_common(sweep, config, o);
  sweep->add_option("--grid", grid, "Grid axis key=v1,v2,... (repeat for a second axis)")->required();
  auto* verify = app.add_subcommand("verify", "Monte Carlo checks of the concentration bounds");
  add_common(verify, config, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return dsee::cli::kConfigError;
  }

  if (*run) return dsee::cli::cmd_run(config, o, std::cout, std::cerr);
  if (*sweep) return dsee::cli::cmd_sweep(config, grid, o, std::cout, std::cerr);
  return dsee::cli::cmd_verify(config, o, std::cout, std::cerr);
}
