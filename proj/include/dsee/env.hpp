#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dsee/rng.hpp"

namespace dsee {

struct Bernoulli {
  double q;
};
struct Gaussian {
  double mean;
  double std;
};
struct Exponential {
  double rate;
};
/// Pareto type I with support [scale, inf).
struct Pareto {
  double shape;
  double scale;
};
/// Student's t with unit scale, shifted by `location`.
struct StudentT {
  double dof;
  double location;
};

/// One arm's reward distribution. Construction enforces the parameter
/// support, so every ArmSpec has a finite mean.
class ArmSpec {
 public:
  using Params = std::variant<Bernoulli, Gaussian, Exponential, Pareto, StudentT>;

  explicit ArmSpec(Params params);

  const Params& params() const noexcept { return params_; }
  std::string kind() const;
  std::string describe() const;

  double mean() const noexcept;
  double sample(Rng& rng) const;
  /// True when the moment generating function exists near zero.
  bool light_tailed() const noexcept;

 private:
  Params params_;
};

/// Descending-mean ordering of a bandit's arms (ties by ascending index).
struct Ranking {
  /// order[r] is the arm holding rank r + 1.
  std::vector<std::size_t> order;
  /// gaps[r] = mean(order[0]) - mean(order[r]); gaps[0] == 0.
  std::vector<double> gaps;
  /// rank[arm] is the 1-based rank of `arm`.
  std::vector<std::size_t> rank;
};

Ranking rank_means(const std::vector<double>& means);

/// An ordered, immutable list of arms. Arms are indexed from 0.
class Bandit {
 public:
  explicit Bandit(std::vector<ArmSpec> arms);

  std::size_t size() const noexcept { return arms_.size(); }
  const ArmSpec& arm(std::size_t n) const;
  const std::vector<ArmSpec>& arms() const noexcept { return arms_; }

  double sample_reward(std::size_t arm, Rng& rng) const;
  std::vector<double> true_means() const;
  Ranking gaps() const { return rank_means(true_means()); }

 private:
  std::vector<ArmSpec> arms_;
};

/// E|X - mean|^p, or nullopt when that moment is infinite. Throws UsageError
/// for p <= 1.
std::optional<double> central_moment_bound(const ArmSpec& spec, double p);
/// E|X|^p, or nullopt when infinite. Throws UsageError for p <= 1.
std::optional<double> raw_moment_bound(const ArmSpec& spec, double p);

/// Smallest zeta with M''(u) <= zeta on [-u0, u0], where M is the moment
/// generating function of the centered reward. nullopt for heavy tails or
/// when u0 reaches the edge of the mgf's domain.
std::optional<double> mgf_curvature_bound(const ArmSpec& spec, double u0);

}  // namespace dsee
