#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dsee/cli/config.hpp"

namespace dsee::cli {

enum ExitCode : int {
  kOk = 0,
  kVerifyFailed = 1,
  kConfigError = 2,
  kPreconditionFailed = 3,
  kRuntimeFailure = 4,
};

/// Command-line values that take precedence over the config file.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  bool strict = false;
  std::optional<std::size_t> reps;
  std::optional<std::uint64_t> horizon;
  std::optional<unsigned> threads;
};

void apply(const Overrides& o, ExperimentConfig& cfg);

/// One axis of a sweep, "key=v1,v2,...".
struct GridAxis {
  std::string key;
  std::vector<std::string> values;
};
GridAxis parse_grid(const std::string& text);

/// Sets `key` on every part of `cfg` that carries it. Throws UsageError
/// when nothing matches or the value does not parse.
void set_field(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Curve files for every policy in `cfg`, written under `dir` as
/// <prefix><policy>.csv. Returns the file names in policy order. Throws
/// PreconditionError in strict mode.
std::vector<std::string> write_curves(const ExperimentConfig& cfg, const std::filesystem::path& dir,
                                      const std::string& prefix, std::ostream& summary);

int cmd_run(const std::string& config_path, const Overrides& o, std::ostream& out, std::ostream& err);
int cmd_sweep(const std::string& config_path, const std::vector<std::string>& grid, const Overrides& o,
              std::ostream& out, std::ostream& err);
int cmd_verify(const std::string& config_path, const Overrides& o, std::ostream& out,
               std::ostream& err);

}  // namespace dsee::cli
