#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "dsee/env.hpp"
#include "dsee/policy.hpp"

namespace dsee {

/// Costs of the rank objectives. by_rank[r - 1] is C_r for the m-th best
/// objective (missing entries default to 1); `flat` is charged by the
/// top-set objective for any arm outside the set.
struct CostModel {
  std::vector<double> by_rank;
  double flat = 1.0;
};

/// Cost of one play of the arm with 1-based true rank `rank`. Best charges
/// C_rank off rank 1, MthBest charges C_rank off rank m, TopSet charges the
/// flat cost beyond rank M.
double objective_cost(std::size_t rank, const Objective& objective, const CostModel& costs);

struct Checkpoint {
  std::uint64_t t = 0;
  double cumulative_reward = 0.0;
  /// Sum of mean gaps (Best) or objective costs of the arms played.
  double pseudo_regret = 0.0;
  /// t * best mean - cumulative reward.
  double realized_regret = 0.0;
  std::uint64_t explorations = 0;
  std::uint64_t exploit_slots = 0;
  /// Exploitation slots that incurred a nonzero cost.
  std::uint64_t exploit_misses = 0;
  std::vector<std::uint64_t> counts;
};

struct Trajectory {
  std::vector<Checkpoint> checkpoints;
  /// Per-slot arm and slot kind, filled only when requested.
  std::vector<std::size_t> choices;
  std::vector<SlotKind> kinds;
};

struct RunOptions {
  Objective objective = BestArm{};
  CostModel costs;
  bool record_choices = false;
};

/// Plays `policy` for t = 1..horizon against `bandit`, drawing rewards from
/// Rng(seed), and snapshots the running totals at each checkpoint.
Trajectory run_single(const Bandit& bandit, Policy& policy, std::uint64_t horizon,
                      std::uint64_t seed, std::span<const std::uint64_t> checkpoints,
                      const RunOptions& options = {});

/// floor(10^(k/4)) for k = 0, 1, ... up to the horizon, duplicates removed.
std::vector<std::uint64_t> default_checkpoints(std::uint64_t horizon);

struct ReplicationPlan {
  std::uint64_t horizon = 1000;
  std::vector<std::uint64_t> checkpoints;
  std::size_t replications = 1;
  std::uint64_t master_seed = 0;
  /// 0 picks the hardware concurrency.
  unsigned threads = 0;
  RunOptions options;
};

/// Replication r runs a fresh policy from `make_policy` with seed
/// substream_seed(master_seed, r). Output order is replication order
/// regardless of threading.
std::vector<Trajectory> run_replications(const Bandit& bandit, const PolicyFactory& make_policy,
                                         const ReplicationPlan& plan);

struct CurvePoint {
  std::uint64_t t = 0;
  double mean = 0.0;
  double std = 0.0;
  double q05 = 0.0;
  double q95 = 0.0;
  std::size_t reps = 0;
};

struct RegretCurve {
  std::vector<CurvePoint> points;
};

/// Pointwise mean, sample standard deviation and 5%/95% quantiles of the
/// pseudo-regret across trajectories.
RegretCurve aggregate(std::span<const Trajectory> trajectories);

/// Same statistics for any per-replication series: values[r][i] is the
/// value of replication r at time ts[i].
RegretCurve aggregate_series(std::span<const std::uint64_t> ts,
                             std::span<const std::vector<double>> values);

/// Linear-interpolation quantile (type 7) of an unsorted sample.
double empirical_quantile(std::vector<double> values, double q);

/// Runs body(i) for i in [0, count) on up to `threads` workers.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace dsee
