#include "dsee/estimate.hpp"

#include <cmath>

#include "dsee/error.hpp"

namespace dsee {
namespace {

void check_power(double p) {
  if (!(p > 1.0 && p <= 2.0)) throw UsageError("p must lie in (1, 2]");
}

void check_eps(double eps) {
  if (!(eps > 0.0 && eps <= 0.5)) throw UsageError("eps must lie in (0, 1/2]");
}

}  // namespace

ArmStats::ArmStats(bool retain_samples, std::optional<double> truncation_power)
    : retain_(retain_samples), power_(retain_samples ? truncation_power : std::nullopt) {}

void ArmStats::record(double x) {
  ++count_;
  sum_ += x;
  if (!retain_) return;
  samples_.push_back(x);
  if (power_) scaled_.push_back(std::pow(std::fabs(x), *power_) / static_cast<double>(count_));
}

double sample_mean(const ArmStats& stats) {
  if (stats.count() == 0) throw UsageError("sample mean of an arm with no observations");
  return stats.sum() / static_cast<double>(stats.count());
}

double truncation_rate(double u, double p) {
  if (!(u > 0.0)) throw UsageError("moment bound u must be > 0");
  check_power(p);
  return std::pow(4.0, p / (1.0 - p)) * std::pow(u, 1.0 / (1.0 - p));
}

double epsilon_schedule(std::uint64_t tau, double a, double delta, double p) {
  check_power(p);
  if (tau < 1) throw UsageError("epsilon schedule needs tau >= 1");
  if (!(a > 0.0)) throw UsageError("epsilon schedule needs a > 0");
  if (!(delta > 0.0)) throw UsageError("epsilon schedule needs delta > 0");
  const double raw = std::exp(-a * std::pow(delta, p / (p - 1.0)) * static_cast<double>(tau));
  return std::min(raw, 0.5);
}

double truncation_threshold(std::uint64_t k, double u, double p, double eps) {
  check_eps(eps);
  return std::pow(u * static_cast<double>(k) / std::log(1.0 / eps), 1.0 / p);
}

double truncated_mean(const ArmStats& stats, double u, double p, double eps) {
  if (!stats.retains_samples()) throw UsageError("truncated mean needs retained samples");
  if (stats.count() == 0) throw UsageError("truncated mean of an arm with no observations");
  if (!(u > 0.0)) throw UsageError("moment bound u must be > 0");
  check_power(p);
  check_eps(eps);

  const double log_inv_eps = std::log(1.0 / eps);
  const auto xs = stats.samples();
  double total = 0.0;
  if (stats.truncation_power() == p) {
    // |x_k| <= (u k / L)^(1/p)  <=>  |x_k|^p / k <= u / L
    const double level = u / log_inv_eps;
    const auto scaled = stats.scaled_magnitudes();
    for (std::size_t i = 0; i < xs.size(); ++i) total += scaled[i] <= level ? xs[i] : 0.0;
  } else {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double k = static_cast<double>(i + 1);
      const double threshold = std::pow(u * k / log_inv_eps, 1.0 / p);
      total += std::fabs(xs[i]) <= threshold ? xs[i] : 0.0;
    }
  }
  return total / static_cast<double>(stats.count());
}

}  // namespace dsee
