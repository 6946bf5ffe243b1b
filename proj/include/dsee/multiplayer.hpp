#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "dsee/env.hpp"
#include "dsee/policy.hpp"
#include "dsee/sim.hpp"

namespace dsee {

/// Colliders all receive nothing.
struct ZeroOnCollision {};
/// The lowest-indexed collider receives the full reward.
struct WinnerTakesAll {};
/// Each of k colliders receives efficiency / k of the reward.
struct FractionalShare {
  double efficiency = 1.0;
};
using CollisionModel = std::variant<ZeroOnCollision, WinnerTakesAll, FractionalShare>;

std::string describe(const CollisionModel& model);

struct CollisionOutcome {
  /// Reward observed by each player. Players are never told whether they
  /// collided.
  std::vector<double> rewards;
  double system_reward = 0.0;
  /// Number of arms chosen by two or more players.
  std::size_t collided_arms = 0;
};

/// Splits the raw arm rewards among players. A sole occupant of arm n gets
/// raw_rewards[n]; colliders are paid according to `model`.
CollisionOutcome resolve_collisions(std::span<const std::size_t> choices,
                                    std::span<const double> raw_rewards,
                                    const CollisionModel& model);

/// Expected system reward of a joint choice under `model`.
double expected_system_reward(std::span<const std::size_t> choices, std::span<const double> means,
                              const CollisionModel& model);

/// Round-robin time sharing of a common top set: player `player` takes
/// top_set[(exploit_slot + player) mod M]. `top_set` is sorted by arm index.
std::size_t fair_share_arm(std::span<const std::size_t> top_set, std::uint64_t exploit_slot,
                           std::size_t player, std::size_t M);

enum class Sharing {
  /// Player m always exploits rank m + 1.
  Prioritized,
  /// Players rotate over their estimated top-M set, phased by the common
  /// exploitation-slot counter.
  FairRotation,
};

struct DecentralizedConfig {
  std::size_t players = 2;
  Sharing sharing = Sharing::FairRotation;
  CollisionModel collisions = ZeroOnCollision{};
  /// Shared rule and estimator; the objective is set per player.
  PolicyConfig base;
};

struct SystemCheckpoint {
  std::uint64_t t = 0;
  double system_reward = 0.0;
  /// t * (sum of the M best means) - sum of expected system rewards.
  double pseudo_regret = 0.0;
  std::uint64_t explorations = 0;
  std::uint64_t exploration_collisions = 0;
  std::uint64_t exploitation_collisions = 0;
  /// Exploitation slots where some player's target differs from the one it
  /// would pick with perfect estimates.
  std::uint64_t misidentifications = 0;
};

struct DecentralizedTrajectory {
  std::vector<SystemCheckpoint> checkpoints;
  /// choices[t - 1][m], filled only when requested.
  std::vector<std::vector<std::size_t>> choices;
  std::vector<SlotKind> kinds;
  std::vector<std::string> warnings;
};

/// Simulates M independent DSEE players sharing one clock and one
/// exploration rule. Every slot draws one reward per arm from Rng(seed).
DecentralizedTrajectory run_decentralized(const Bandit& bandit, const DecentralizedConfig& config,
                                          std::uint64_t horizon, std::uint64_t seed,
                                          std::span<const std::uint64_t> checkpoints,
                                          bool record_choices = false);

std::vector<DecentralizedTrajectory> run_decentralized_replications(
    const Bandit& bandit, const DecentralizedConfig& config, const ReplicationPlan& plan);

RegretCurve aggregate(std::span<const DecentralizedTrajectory> trajectories);

}  // namespace dsee
