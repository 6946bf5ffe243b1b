#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace dsee {

/// Exploration observations of one arm.
///
/// With retention on, every observation is kept in arrival order so the
/// truncated mean can re-truncate the whole history. When a truncation power
/// p is supplied the stats also cache |x_k|^p / k, which turns each
/// truncation test into a single comparison.
class ArmStats {
 public:
  ArmStats() = default;
  explicit ArmStats(bool retain_samples, std::optional<double> truncation_power = std::nullopt);

  void record(double x);

  std::uint64_t count() const noexcept { return count_; }
  double sum() const noexcept { return sum_; }
  bool retains_samples() const noexcept { return retain_; }
  std::span<const double> samples() const noexcept { return samples_; }

  std::optional<double> truncation_power() const noexcept { return power_; }
  /// |x_k|^p / k for k = 1..count, present only with a truncation power.
  std::span<const double> scaled_magnitudes() const noexcept { return scaled_; }

 private:
  std::uint64_t count_ = 0;
  double sum_ = 0.0;
  bool retain_ = false;
  std::optional<double> power_;
  std::vector<double> samples_;
  std::vector<double> scaled_;
};

/// sum / count. Throws UsageError on an empty record.
double sample_mean(const ArmStats& stats);

/// Exponent rate a = 4^(p/(1-p)) u^(1/(1-p)) tying the moment bound u to the
/// truncated mean's confidence level.
double truncation_rate(double u, double p);

/// min(exp(-a delta^(p/(p-1)) tau), 1/2).
double epsilon_schedule(std::uint64_t tau, double a, double delta, double p);

/// Truncation level (u k / log(1/eps))^(1/p) for the k-th observation.
double truncation_threshold(std::uint64_t k, double u, double p, double eps);

/// (1/tau) * sum_k x_k 1{|x_k| <= truncation_threshold(k, u, p, eps)}.
/// Requires retained samples, eps in (0, 1/2], u > 0, p in (1, 2].
double truncated_mean(const ArmStats& stats, double u, double p, double eps);

}  // namespace dsee
