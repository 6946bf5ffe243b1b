#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "dsee/env.hpp"
#include "dsee/policy.hpp"
#include "dsee/sim.hpp"

namespace dsee::bounds {

/// Per-play losses of every non-target rank, plus the arm count N.
///
/// For the best-arm objective the losses are the gaps Delta_2..Delta_N; for
/// the rank objectives they are the costs C_j of the ranks that miss the
/// target, which is how the regret bounds carry over to those objectives.
struct LossProfile {
  std::size_t arms = 0;
  std::vector<double> losses;

  double worst() const noexcept;
  double total() const noexcept;
};

LossProfile gap_profile(const Ranking& truth);
LossProfile cost_profile(std::size_t arms, const Objective& objective, const CostModel& costs);

/// sum_n ceil(w log T) loss_n + 2 N loss_max (1 + 1/(a delta^2 w - 1)).
/// Throws UsageError unless a delta^2 w > 1.
double bound_log(const LossProfile& profile, double a, double delta, double w, std::uint64_t T);

/// First t >= 1 with a delta^2 f(t) >= b, found by doubling then bisection
/// (f must be non-decreasing). Throws Unavailable past `limit`.
std::uint64_t diverging_start(const std::function<double(double)>& f, double a, double delta,
                              double b, std::uint64_t limit = std::uint64_t{1} << 53);

/// sum_n ceil(f(T) log T) loss_n + t0 + t0^(1-b) / (b - 1), with t0 from
/// diverging_start. Requires b > 1.
double bound_diverging(const LossProfile& profile, const std::function<double(double)>& f,
                       double a, double delta, double b, std::uint64_t T);

/// (3 sqrt 2)^p p^(p/2), the Marcinkiewicz-Zygmund constant bound.
double mz_constant(double p);

/// Polynomial-exploration bound with the central moment m_p = E|X - mean|^p:
///   Delta_N B_p m_p (Delta_2/2)^-p v^-p/2 [e^-1 (T^(1/e) - 1) + 1] + ceil(v T^(1/e))
/// where e = p for p <= 2 and e = 1 + p/2 above.
double bound_heavy(double delta_2, double delta_max, double p, double central_moment, double v,
                   std::uint64_t T);

/// sum_n ceil(w log T) loss_n + 2 N loss_max (1 + 1/(a delta^(p/(p-1)) w - 1)).
double bound_truncated(const LossProfile& profile, double a, double delta, double p, double w,
                       std::uint64_t T);

/// Analytic regret bound matching the (rule, estimator) pair of `config`,
/// or nullopt when the pair has none or its constants do not admit one.
/// Rank objectives use the cost profile in place of the gaps.
std::optional<double> policy_regret_bound(const PolicyConfig& config, const Bandit& bandit,
                                          const CostModel& costs, std::uint64_t T);

/// 2 exp(-a delta^2 s).
double hoeffding_bound(double a, double delta, std::uint64_t s);

/// B_p m_p delta^-p t^(1-p) for p <= 2, B_p m_p delta^-p t^(-p/2) above.
double mz_deviation_bound(double p, double central_moment, double delta, std::uint64_t t);

/// 4 u^(1/p) (log(1/eps) / s)^((p-1)/p).
double truncated_radius(double u, double p, double eps, std::uint64_t s);

}  // namespace dsee::bounds
