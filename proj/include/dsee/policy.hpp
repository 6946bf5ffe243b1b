#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "dsee/env.hpp"
#include "dsee/estimate.hpp"
#include "dsee/schedule.hpp"

namespace dsee {

// Ranks are 1-based (rank 1 = largest mean); arms are 0-based.

struct BestArm {};
struct MthBest {
  std::size_t m;
};
/// Target the M best arms. With `fixed_rank` the player always exploits that
/// rank inside the set; without it the caller picks within the set.
struct TopSet {
  std::size_t M;
  std::optional<std::size_t> fixed_rank;
};
using Objective = std::variant<BestArm, MthBest, TopSet>;

void validate(const Objective& objective, std::size_t arms);
std::string describe(const Objective& objective);

/// Arms sorted by descending estimate, ties by ascending arm index.
std::vector<std::size_t> rank_order(std::span<const double> estimates);
/// Arm chosen by a rank objective. TopSet without a fixed rank throws: the
/// caller must use top_set() and choose.
std::size_t rank_select(std::span<const double> estimates, const Objective& objective);
/// The M arms with the largest estimates, sorted by ascending arm index.
std::vector<std::size_t> top_set(std::span<const double> estimates, std::size_t M);

/// UCB1 index mean + sqrt(2 log t / tau).
double ucb1_index(double mean, std::uint64_t tau, std::uint64_t t);

struct PlainMean {};
/// Truncated empirical mean with moment bound E|X|^p <= u. With `gamma` set
/// the confidence gap delta in the epsilon schedule becomes f(t)^gamma, with
/// f taken from a DivergingRule.
struct TruncatedMean {
  double u;
  double p;
  std::optional<double> gamma;
};
using Estimator = std::variant<PlainMean, TruncatedMean>;

/// Constants of the regret analyses. All are optional: missing ones are
/// derived where possible (delta from c, zeta and u0; a from zeta).
struct DseeConstants {
  std::optional<double> a;
  std::optional<double> zeta;
  std::optional<double> u0;
  std::optional<double> c;
  std::optional<double> delta;
  double b = 2.0;
};

struct PolicyConfig {
  ExplorationRule rule = LogRule{1.0};
  Estimator estimator = PlainMean{};
  Objective objective = BestArm{};
  DseeConstants constants;
};

/// delta if given, otherwise min(c/2, zeta u0) (or c/2 without zeta, u0).
std::optional<double> resolved_delta(const DseeConstants& k);
/// a if given, otherwise 1 / (2 zeta).
std::optional<double> resolved_light_tail_rate(const DseeConstants& k);

/// Fills in zeta (and u0, default 1) from the bandit's moment generating
/// functions when every arm is light-tailed and zeta was not supplied.
DseeConstants with_derived_light_tail(const DseeConstants& k, const Bandit& bandit);

/// Effective (u, p) fed to the truncated mean: p > 2 is reduced to p = 2
/// with u + 1, since E|X|^p <= u for p > 2 implies E|X|^2 <= u + 1.
struct TruncationParams {
  double u;
  double p;
};
TruncationParams effective_truncation(const TruncatedMean& est);

/// Gap window the rank objective must resolve: Delta_2 for Best, the gap to
/// the nearest neighbouring rank for MthBest, Delta_{M+1} - Delta_M for TopSet.
double objective_gap_window(const Objective& objective, const Ranking& truth);

/// Checks the analysis preconditions of `config` against ground truth and
/// returns one message per violation (empty when everything holds).
std::vector<std::string> check_preconditions(const PolicyConfig& config, const Bandit& bandit);

enum class SlotKind { Explore, Exploit };

struct Decision {
  std::size_t arm;
  SlotKind kind;
};

/// select_arm(t) then observe(t, ...) once per slot, t = 1, 2, ...
class Policy {
 public:
  virtual ~Policy() = default;

  virtual Decision select_arm(std::uint64_t t) = 0;
  virtual void observe(std::uint64_t t, std::size_t arm, double reward, SlotKind kind) = 0;

  virtual std::size_t arms() const noexcept = 0;
  /// Observations feeding each arm's estimate.
  virtual std::vector<std::uint64_t> observation_counts() const = 0;
  /// Slots spent in the exploration sequence so far.
  virtual std::uint64_t exploration_count() const noexcept = 0;
  virtual std::string name() const = 0;
};

using PolicyFactory = std::function<std::unique_ptr<Policy>()>;

/// Deterministic sequencing of exploration and exploitation. The
/// (rule, estimator) pair selects the variant; only exploration rewards
/// enter the estimates.
class DseePolicy final : public Policy {
 public:
  /// Chooses an arm at an exploitation slot from the current estimates.
  using ExploitChooser = std::function<std::size_t(std::span<const double>)>;

  DseePolicy(PolicyConfig config, std::size_t arms, std::size_t offset = 0);

  Decision select_arm(std::uint64_t t) override;
  /// Same as select_arm, but exploitation slots defer to `chooser`.
  Decision select_arm(std::uint64_t t, const ExploitChooser& chooser);
  void observe(std::uint64_t t, std::size_t arm, double reward, SlotKind kind) override;

  std::size_t arms() const noexcept override { return stats_.size(); }
  std::vector<std::uint64_t> observation_counts() const override;
  std::uint64_t exploration_count() const noexcept override { return explored_; }
  std::string name() const override { return "dsee"; }

  const PolicyConfig& config() const noexcept { return config_; }
  std::size_t offset() const noexcept { return offset_; }
  const ArmStats& stats(std::size_t arm) const { return stats_.at(arm); }
  /// Current per-arm estimates at slot t (recomputed only when stale).
  std::span<const double> estimates(std::uint64_t t);

 private:
  double truncation_delta(std::uint64_t t) const;

  PolicyConfig config_;
  std::size_t offset_;
  std::vector<ArmStats> stats_;
  std::uint64_t explored_ = 0;
  std::uint64_t last_t_ = 0;
  std::optional<Decision> pending_;

  std::vector<double> estimates_;
  bool estimates_stale_ = true;
  bool time_varying_ = false;
  std::optional<TruncationParams> truncation_;
};

/// UCB1 baseline: one pull per arm, then the largest index.
class Ucb1Policy final : public Policy {
 public:
  explicit Ucb1Policy(std::size_t arms);

  Decision select_arm(std::uint64_t t) override;
  void observe(std::uint64_t t, std::size_t arm, double reward, SlotKind kind) override;

  std::size_t arms() const noexcept override { return counts_.size(); }
  std::vector<std::uint64_t> observation_counts() const override { return counts_; }
  std::uint64_t exploration_count() const noexcept override { return initial_pulls_; }
  std::string name() const override { return "ucb1"; }

 private:
  std::vector<std::uint64_t> counts_;
  std::vector<double> sums_;
  std::uint64_t initial_pulls_ = 0;
  std::uint64_t last_t_ = 0;
  std::optional<Decision> pending_;
};

}  // namespace dsee
