#include "dsee/verify.hpp"

#include <algorithm>
#include <cmath>

#include "dsee/bounds.hpp"
#include "dsee/error.hpp"
#include "dsee/estimate.hpp"
#include "dsee/rng.hpp"
#include "dsee/sim.hpp"

namespace dsee::bounds {
namespace {

std::vector<std::uint64_t> sorted_sizes(std::span<const std::uint64_t> sizes) {
  std::vector<std::uint64_t> out(sizes.begin(), sizes.end());
  if (out.empty()) throw UsageError("sample-size grid is empty");
  for (auto s : out)
    if (s < 1) throw UsageError("sample sizes must be >= 1");
  return out;
}

// hits[r * grid + g] for g = size_index * deltas + delta_index; each
// replication draws max(sizes) rewards and checks every prefix in the grid.
template <class Deviation>
std::vector<std::size_t> count_deviations(const ArmSpec& dist, std::span<const std::uint64_t> sizes,
                                          std::size_t deltas, std::size_t reps, std::uint64_t seed,
                                          unsigned threads, Deviation deviation) {
  const std::uint64_t longest = *std::max_element(sizes.begin(), sizes.end());
  const std::size_t grid = sizes.size() * deltas;
  std::vector<unsigned char> hits(reps * grid, 0);
  parallel_for(reps, threads, [&](std::size_t r) {
    Rng rng(substream_seed(seed, r));
    std::vector<double> xs(longest);
    for (auto& x : xs) x = dist.sample(rng);
    for (std::size_t i = 0; i < sizes.size(); ++i)
      for (std::size_t j = 0; j < deltas; ++j)
        hits[r * grid + i * deltas + j] =
            deviation(std::span<const double>(xs.data(), sizes[i]), j) ? 1 : 0;
  });
  std::vector<std::size_t> totals(grid, 0);
  for (std::size_t r = 0; r < reps; ++r)
    for (std::size_t g = 0; g < grid; ++g) totals[g] += hits[r * grid + g];
  return totals;
}

CheckRow make_row(std::uint64_t s, double delta, std::size_t hits, std::size_t reps, double bound) {
  CheckRow row;
  row.sample_size = s;
  row.delta = delta;
  row.reps = reps;
  row.empirical = static_cast<double>(hits) / static_cast<double>(reps);
  row.bound = bound;
  row.std_error = std::sqrt(row.empirical * (1.0 - row.empirical) / static_cast<double>(reps));
  row.status = judge(row.empirical, bound, reps);
  return row;
}

double prefix_mean(std::span<const double> xs) {
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

}  // namespace

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass:
      return "pass";
    case CheckStatus::Fail:
      return "fail";
    case CheckStatus::Vacuous:
      return "skipped";
  }
  return "?";
}

bool CheckReport::passed() const noexcept {
  return std::none_of(rows.begin(), rows.end(),
                      [](const CheckRow& r) { return r.status == CheckStatus::Fail; });
}

CheckStatus judge(double empirical, double bound, std::size_t reps) {
  if (bound >= 1.0) return CheckStatus::Vacuous;
  const double se = std::sqrt(empirical * (1.0 - empirical) / static_cast<double>(reps));
  return empirical <= bound + 3.0 * se ? CheckStatus::Pass : CheckStatus::Fail;
}

std::vector<std::string> hoeffding_window_issues(const ArmSpec& dist, const HoeffdingConstants& k,
                                                 std::span<const double> deltas) {
  std::vector<std::string> issues;
  if (!dist.light_tailed()) {
    issues.push_back(dist.describe() + " is heavy-tailed");
    return issues;
  }
  const auto zeta = k.zeta ? k.zeta : mgf_curvature_bound(dist, k.u0);
  if (!zeta) {
    issues.push_back("moment generating function undefined on [-u0, u0]");
    return issues;
  }
  if (!(k.a > 0.0 && k.a <= 1.0 / (2.0 * *zeta)))
    issues.push_back("a = " + std::to_string(k.a) + " outside (0, 1/(2 zeta)] with zeta = " +
                     std::to_string(*zeta));
  for (double d : deltas)
    if (!(d >= 0.0 && d <= *zeta * k.u0))
      issues.push_back("delta = " + std::to_string(d) + " outside [0, zeta u0] = [0, " +
                       std::to_string(*zeta * k.u0) + "]");
  return issues;
}

CheckReport verify_hoeffding(const ArmSpec& dist, const HoeffdingConstants& k,
                             std::span<const double> deltas, std::span<const std::uint64_t> sizes,
                             std::size_t reps, std::uint64_t seed, unsigned threads) {
  if (const auto issues = hoeffding_window_issues(dist, k, deltas); !issues.empty())
    throw UsageError(issues.front());
  if (reps < 1) throw UsageError("need at least one replication");
  const auto grid = sorted_sizes(sizes);
  const double theta = dist.mean();
  const std::vector<double> ds(deltas.begin(), deltas.end());
  const auto totals = count_deviations(dist, grid, ds.size(), reps, seed, threads,
                                       [&](std::span<const double> xs, std::size_t j) {
                                         return std::fabs(prefix_mean(xs) - theta) >= ds[j];
                                       });
  CheckReport report;
  report.lemma = "hoeffding";
  report.distribution = dist.describe();
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (std::size_t j = 0; j < ds.size(); ++j)
      report.rows.push_back(make_row(grid[i], ds[j], totals[i * ds.size() + j], reps,
                                     hoeffding_bound(k.a, ds[j], grid[i])));
  return report;
}

CheckReport verify_mz(const ArmSpec& dist, double p, std::span<const double> deltas,
                      std::span<const std::uint64_t> sizes, std::size_t reps, std::uint64_t seed,
                      unsigned threads) {
  const auto moment = central_moment_bound(dist, p);
  if (!moment) throw Unavailable("central moment of order p is infinite for " + dist.describe());
  if (reps < 1) throw UsageError("need at least one replication");
  for (double d : deltas)
    if (!(d > 0.0)) throw UsageError("deviation thresholds must be > 0");
  const auto grid = sorted_sizes(sizes);
  const double theta = dist.mean();
  const std::vector<double> ds(deltas.begin(), deltas.end());
  const auto totals = count_deviations(dist, grid, ds.size(), reps, seed, threads,
                                       [&](std::span<const double> xs, std::size_t j) {
                                         return std::fabs(prefix_mean(xs) - theta) >= ds[j];
                                       });
  CheckReport report;
  report.lemma = "mz";
  report.distribution = dist.describe();
  report.notes.push_back("central moment m_p = " + std::to_string(*moment));
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (std::size_t j = 0; j < ds.size(); ++j)
      report.rows.push_back(make_row(grid[i], ds[j], totals[i * ds.size() + j], reps,
                                     mz_deviation_bound(p, *moment, ds[j], grid[i])));
  return report;
}

CheckReport verify_truncated(const ArmSpec& dist, double u, double p, double eps,
                             std::span<const std::uint64_t> sizes, std::size_t reps,
                             std::uint64_t seed, unsigned threads) {
  if (!(eps > 0.0 && eps <= 0.5)) throw UsageError("eps must lie in (0, 1/2]");
  if (!(p > 1.0 && p <= 2.0)) throw UsageError("p must lie in (1, 2]");
  if (!(u > 0.0)) throw UsageError("u must be > 0");
  const auto raw = raw_moment_bound(dist, p);
  if (!raw || *raw > u) throw UsageError("E|X|^p exceeds u for " + dist.describe());
  if (reps < 1) throw UsageError("need at least one replication");
  const auto grid = sorted_sizes(sizes);
  const double theta = dist.mean();
  const auto totals = count_deviations(
      dist, grid, 1, reps, seed, threads, [&](std::span<const double> xs, std::size_t) {
        ArmStats stats(true);
        for (double x : xs) stats.record(x);
        return std::fabs(truncated_mean(stats, u, p, eps) - theta) >
               truncated_radius(u, p, eps, xs.size());
      });
  CheckReport report;
  report.lemma = "truncated";
  report.distribution = dist.describe();
  report.notes.push_back("E|X|^p = " + std::to_string(*raw));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CheckRow row = make_row(grid[i], truncated_radius(u, p, eps, grid[i]), totals[i], reps, 2.0 * eps);
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace dsee::bounds
