#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dsee/env.hpp"
#include "dsee/multiplayer.hpp"
#include "dsee/policy.hpp"
#include "dsee/sim.hpp"

namespace dsee::cli {

/// Malformed configuration. what() is "<source>:<line>: <message>".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, int line, const std::string& message);
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Constants that break a module precondition.
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PolicyBlock {
  enum class Kind { Dsee, Ucb1 };
  std::string name;
  Kind kind = Kind::Dsee;
  PolicyConfig config;
  CostModel costs;
  bool bound = true;
};

struct MultiplayerBlock {
  std::size_t players = 2;
  Sharing sharing = Sharing::FairRotation;
  CollisionModel collisions = ZeroOnCollision{};
};

struct VerifyBlock {
  enum class Lemma { Hoeffding, Mz, Truncated };
  Lemma lemma = Lemma::Hoeffding;
  ArmSpec arm{Bernoulli{0.5}};
  double a = 0.0;
  double u0 = 1.0;
  std::optional<double> zeta;
  double p = 2.0;
  double u = 1.0;
  double eps = 0.01;
  std::vector<double> deltas;
  std::vector<std::uint64_t> sizes;
  std::size_t reps = 1000;
};

struct ExperimentConfig {
  std::vector<ArmSpec> arms;
  std::vector<PolicyBlock> policies;
  std::uint64_t horizon = 1000;
  /// Empty means default_checkpoints(horizon).
  std::vector<std::uint64_t> checkpoints;
  std::size_t replications = 10;
  std::uint64_t seed = 1;
  bool strict = false;
  unsigned threads = 0;
  std::string output = "out";
  std::optional<MultiplayerBlock> multiplayer;
  std::vector<VerifyBlock> verifiers;
};

ExperimentConfig parse_config(const std::string& text, const std::string& source = "<config>");
ExperimentConfig load_config(const std::string& path);

/// Fully resolved configuration in the same grammar; parse_config on the
/// result reproduces `config`.
std::string to_yaml(const ExperimentConfig& config);

/// Decimal text with 17 significant digits.
std::string format_number(double x);

}  // namespace dsee::cli
