#include "dsee/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "dsee/error.hpp"

namespace dsee {

double objective_cost(std::size_t rank, const Objective& objective, const CostModel& costs) {
  auto cost_of = [&](std::size_t r) {
    return r - 1 < costs.by_rank.size() ? costs.by_rank[r - 1] : 1.0;
  };
  if (const auto* top = std::get_if<TopSet>(&objective)) return rank <= top->M ? 0.0 : costs.flat;
  const std::size_t target = std::holds_alternative<MthBest>(objective)
                                 ? std::get<MthBest>(objective).m
                                 : std::size_t{1};
  return rank == target ? 0.0 : cost_of(rank);
}

Trajectory run_single(const Bandit& bandit, Policy& policy, std::uint64_t horizon,
                      std::uint64_t seed, std::span<const std::uint64_t> checkpoints,
                      const RunOptions& options) {
  if (policy.arms() != bandit.size()) throw UsageError("policy and bandit disagree on the arm count");
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (checkpoints[i] < 1 || checkpoints[i] > horizon)
      throw UsageError("checkpoints must lie in [1, horizon]");
    if (i > 0 && checkpoints[i] <= checkpoints[i - 1])
      throw UsageError("checkpoints must be strictly increasing");
  }

  const auto means = bandit.true_means();
  const Ranking truth = rank_means(means);
  const double best = means[truth.order.front()];
  const bool gap_regret = std::holds_alternative<BestArm>(options.objective);

  // Per-arm cost of one play, resolved once.
  std::vector<double> cost(bandit.size());
  for (std::size_t n = 0; n < bandit.size(); ++n) {
    cost[n] = gap_regret ? best - means[n]
                         : objective_cost(truth.rank[n], options.objective, options.costs);
  }

  Trajectory out;
  out.checkpoints.reserve(checkpoints.size());
  if (options.record_choices) {
    out.choices.reserve(horizon);
    out.kinds.reserve(horizon);
  }

  Rng rng(seed);
  double reward_sum = 0.0;
  double pseudo = 0.0;
  std::uint64_t exploit_slots = 0;
  std::uint64_t exploit_misses = 0;
  std::size_t next = 0;
  for (std::uint64_t t = 1; t <= horizon; ++t) {
    const Decision d = policy.select_arm(t);
    const double x = bandit.sample_reward(d.arm, rng);
    policy.observe(t, d.arm, x, d.kind);

    reward_sum += x;
    pseudo += cost[d.arm];
    if (d.kind == SlotKind::Exploit) {
      ++exploit_slots;
      if (cost[d.arm] > 0.0) ++exploit_misses;
    }
    if (options.record_choices) {
      out.choices.push_back(d.arm);
      out.kinds.push_back(d.kind);
    }
    if (next < checkpoints.size() && t == checkpoints[next]) {
      Checkpoint c;
      c.t = t;
      c.cumulative_reward = reward_sum;
      c.pseudo_regret = pseudo;
      c.realized_regret = static_cast<double>(t) * best - reward_sum;
      c.explorations = policy.exploration_count();
      c.exploit_slots = exploit_slots;
      c.exploit_misses = exploit_misses;
      c.counts = policy.observation_counts();
      out.checkpoints.push_back(std::move(c));
      ++next;
    }
  }
  return out;
}

std::vector<std::uint64_t> default_checkpoints(std::uint64_t horizon) {
  std::vector<std::uint64_t> out;
  for (int k = 0;; ++k) {
    const double x = std::floor(std::pow(10.0, k / 4.0) + 1e-9);
    if (x > static_cast<double>(horizon)) break;
    const auto t = static_cast<std::uint64_t>(x);
    if (out.empty() || out.back() != t) out.push_back(t);
  }
  return out;
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> cursor{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = cursor++; i < count; i = cursor++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<Trajectory> run_replications(const Bandit& bandit, const PolicyFactory& make_policy,
                                         const ReplicationPlan& plan) {
  const auto checkpoints =
      plan.checkpoints.empty() ? default_checkpoints(plan.horizon) : plan.checkpoints;
  std::vector<Trajectory> out(plan.replications);
  parallel_for(plan.replications, plan.threads, [&](std::size_t r) {
    auto policy = make_policy();
    out[r] = run_single(bandit, *policy, plan.horizon, substream_seed(plan.master_seed, r),
                        checkpoints, plan.options);
  });
  return out;
}

double empirical_quantile(std::vector<double> values, double q) {
  if (values.empty()) throw UsageError("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double h = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

RegretCurve aggregate_series(std::span<const std::uint64_t> ts,
                             std::span<const std::vector<double>> values) {
  RegretCurve curve;
  if (values.empty()) return curve;
  for (const auto& series : values)
    if (series.size() != ts.size()) throw UsageError("series length does not match the checkpoints");
  const std::size_t reps = values.size();
  std::vector<double> column(reps);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    double sum = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
      column[r] = values[r][i];
      sum += column[r];
    }
    const double mean = sum / static_cast<double>(reps);
    double ss = 0.0;
    for (double v : column) ss += (v - mean) * (v - mean);
    CurvePoint p;
    p.t = ts[i];
    p.mean = mean;
    p.std = reps > 1 ? std::sqrt(ss / static_cast<double>(reps - 1)) : 0.0;
    p.q05 = empirical_quantile(column, 0.05);
    p.q95 = empirical_quantile(column, 0.95);
    p.reps = reps;
    curve.points.push_back(p);
  }
  return curve;
}

RegretCurve aggregate(std::span<const Trajectory> trajectories) {
  if (trajectories.empty()) return {};
  const auto& ref = trajectories.front().checkpoints;
  std::vector<std::uint64_t> ts;
  for (const auto& c : ref) ts.push_back(c.t);
  std::vector<std::vector<double>> values;
  values.reserve(trajectories.size());
  for (const auto& tr : trajectories) {
    if (tr.checkpoints.size() != ref.size())
      throw UsageError("trajectories have different checkpoints");
    std::vector<double> series;
    series.reserve(ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) {
      if (tr.checkpoints[i].t != ts[i]) throw UsageError("trajectories have different checkpoints");
      series.push_back(tr.checkpoints[i].pseudo_regret);
    }
    values.push_back(std::move(series));
  }
  return aggregate_series(ts, values);
}

}  // namespace dsee
