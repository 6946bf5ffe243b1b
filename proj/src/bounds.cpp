#include "dsee/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dsee/error.hpp"

namespace dsee::bounds {

double LossProfile::worst() const noexcept {
  return losses.empty() ? 0.0 : *std::max_element(losses.begin(), losses.end());
}

double LossProfile::total() const noexcept {
  return std::accumulate(losses.begin(), losses.end(), 0.0);
}

LossProfile gap_profile(const Ranking& truth) {
  LossProfile p;
  p.arms = truth.gaps.size();
  if (p.arms > 1) p.losses.assign(truth.gaps.begin() + 1, truth.gaps.end());
  return p;
}

LossProfile cost_profile(std::size_t arms, const Objective& objective, const CostModel& costs) {
  LossProfile p;
  p.arms = arms;
  for (std::size_t r = 1; r <= arms; ++r) {
    const double c = objective_cost(r, objective, costs);
    if (c > 0.0) p.losses.push_back(c);
  }
  return p;
}

double bound_log(const LossProfile& profile, double a, double delta, double w, std::uint64_t T) {
  if (T < 1) throw UsageError("horizon must be >= 1");
  const double rate = a * delta * delta * w;
  if (!(rate > 1.0)) throw UsageError("log bound needs a delta^2 w > 1");
  const double explore = std::ceil(w * std::log(static_cast<double>(T))) * profile.total();
  return explore + 2.0 * static_cast<double>(profile.arms) * profile.worst() * (1.0 + 1.0 / (rate - 1.0));
}

std::uint64_t diverging_start(const std::function<double(double)>& f, double a, double delta,
                              double b, std::uint64_t limit) {
  const double scale = a * delta * delta;
  auto reached = [&](std::uint64_t t) { return scale * f(static_cast<double>(t)) >= b; };
  if (reached(1)) return 1;
  std::uint64_t lo = 1;  // !reached(lo)
  std::uint64_t hi = 2;
  while (!reached(hi)) {
    if (hi >= limit) throw Unavailable("f does not reach b / (a delta^2) within the scan limit");
    lo = hi;
    hi = std::min(hi * 2, limit);
  }
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    (reached(mid) ? hi : lo) = mid;
  }
  return hi;
}

double bound_diverging(const LossProfile& profile, const std::function<double(double)>& f,
                       double a, double delta, double b, std::uint64_t T) {
  if (T < 1) throw UsageError("horizon must be >= 1");
  if (!(b > 1.0)) throw UsageError("diverging bound needs b > 1");
  const double t0 = static_cast<double>(diverging_start(f, a, delta, b));
  const double tt = static_cast<double>(T);
  const double explore = std::ceil(f(tt) * std::log(tt)) * profile.total();
  return explore + t0 + std::pow(t0, 1.0 - b) / (b - 1.0);
}

double mz_constant(double p) {
  return std::pow(3.0 * std::sqrt(2.0), p) * std::pow(p, p / 2.0);
}

double bound_heavy(double delta_2, double delta_max, double p, double central_moment, double v,
                   std::uint64_t T) {
  if (!(p > 1.0)) throw UsageError("heavy-tail bound needs p > 1");
  if (!(v > 0.0)) throw UsageError("heavy-tail bound needs v > 0");
  if (!(delta_2 > 0.0)) throw UsageError("heavy-tail bound needs Delta_2 > 0");
  if (!std::isfinite(central_moment)) throw Unavailable("central moment is infinite");
  if (T < 1) throw UsageError("horizon must be >= 1");
  const double e = p <= 2.0 ? p : 1.0 + p / 2.0;
  const double tt = static_cast<double>(T);
  const double grow = std::pow(tt, 1.0 / e);
  const double lead = delta_max * mz_constant(p) * central_moment / std::pow(delta_2 / 2.0, p) *
                      std::pow(v, -p / 2.0);
  return lead * (e * (grow - 1.0) + 1.0) + std::ceil(v * grow);
}

double bound_truncated(const LossProfile& profile, double a, double delta, double p, double w,
                       std::uint64_t T) {
  if (T < 1) throw UsageError("horizon must be >= 1");
  if (!(p > 1.0)) throw UsageError("truncated bound needs p > 1");
  const double rate = a * std::pow(delta, p / (p - 1.0)) * w;
  if (!(rate > 1.0)) throw UsageError("truncated bound needs a delta^(p/(p-1)) w > 1");
  const double explore = std::ceil(w * std::log(static_cast<double>(T))) * profile.total();
  return explore + 2.0 * static_cast<double>(profile.arms) * profile.worst() * (1.0 + 1.0 / (rate - 1.0));
}

std::optional<double> policy_regret_bound(const PolicyConfig& config, const Bandit& bandit,
                                          const CostModel& costs, std::uint64_t T) {
  const Ranking truth = bandit.gaps();
  const bool best = std::holds_alternative<BestArm>(config.objective);
  const LossProfile profile =
      best ? gap_profile(truth) : cost_profile(bandit.size(), config.objective, costs);
  try {
    if (std::holds_alternative<PlainMean>(config.estimator)) {
      const DseeConstants k = with_derived_light_tail(config.constants, bandit);
      const auto a = resolved_light_tail_rate(k);
      const auto delta = resolved_delta(k);
      if (const auto* r = std::get_if<LogRule>(&config.rule)) {
        if (!a || !delta) return std::nullopt;
        return bound_log(profile, *a, *delta, r->w, T);
      }
      if (const auto* r = std::get_if<DivergingRule>(&config.rule)) {
        if (!a || !delta) return std::nullopt;
        return bound_diverging(profile, [r](double t) { return r->f(t); }, *a, *delta,
                               config.constants.b, T);
      }
      const auto& r = std::get<PolyRule>(config.rule);
      if (!best || truth.gaps.size() < 2) return std::nullopt;
      double moment = 0.0;
      for (const auto& arm : bandit.arms()) {
        const auto m = central_moment_bound(arm, r.p);
        if (!m) return std::nullopt;
        moment = std::max(moment, *m);
      }
      return bound_heavy(truth.gaps[1], truth.gaps.back(), r.p, moment, r.v, T);
    }
    const auto& est = std::get<TruncatedMean>(config.estimator);
    const auto* r = std::get_if<LogRule>(&config.rule);
    const auto delta = resolved_delta(config.constants);
    if (!r || est.gamma || !delta) return std::nullopt;
    const auto eff = effective_truncation(est);
    return bound_truncated(profile, truncation_rate(eff.u, eff.p), *delta, eff.p, r->w, T);
  } catch (const UsageError&) {
    return std::nullopt;
  } catch (const Unavailable&) {
    return std::nullopt;
  }
}

double hoeffding_bound(double a, double delta, std::uint64_t s) {
  return 2.0 * std::exp(-a * delta * delta * static_cast<double>(s));
}

double mz_deviation_bound(double p, double central_moment, double delta, std::uint64_t t) {
  if (!(p > 1.0)) throw UsageError("deviation bound needs p > 1");
  if (!(delta > 0.0)) throw UsageError("deviation bound needs delta > 0");
  const double tt = static_cast<double>(t);
  const double decay = p <= 2.0 ? std::pow(tt, 1.0 - p) : std::pow(tt, -p / 2.0);
  return mz_constant(p) * central_moment * std::pow(delta, -p) * decay;
}

double truncated_radius(double u, double p, double eps, std::uint64_t s) {
  return 4.0 * std::pow(u, 1.0 / p) *
         std::pow(std::log(1.0 / eps) / static_cast<double>(s), (p - 1.0) / p);
}

}  // namespace dsee::bounds
