#include "dsee/multiplayer.hpp"

#include <algorithm>
#include <cmath>

#include "dsee/error.hpp"

namespace dsee {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Occupancy of each arm.
std::vector<std::size_t> occupancy(std::span<const std::size_t> choices, std::size_t arms) {
  std::vector<std::size_t> occ(arms, 0);
  for (std::size_t c : choices) {
    if (c >= arms) throw UsageError("chosen arm out of range");
    ++occ[c];
  }
  return occ;
}

}  // namespace

std::string describe(const CollisionModel& model) {
  return std::visit(overloaded{
                        [](const ZeroOnCollision&) { return std::string("zero"); },
                        [](const WinnerTakesAll&) { return std::string("winner"); },
                        [](const FractionalShare& f) {
                          return "fractional(efficiency=" + std::to_string(f.efficiency) + ")";
                        },
                    },
                    model);
}

CollisionOutcome resolve_collisions(std::span<const std::size_t> choices,
                                    std::span<const double> raw_rewards,
                                    const CollisionModel& model) {
  const auto occ = occupancy(choices, raw_rewards.size());
  CollisionOutcome out;
  out.rewards.assign(choices.size(), 0.0);
  std::vector<bool> winner_paid(raw_rewards.size(), false);
  for (std::size_t m = 0; m < choices.size(); ++m) {
    const std::size_t n = choices[m];
    const double x = raw_rewards[n];
    if (occ[n] == 1) {
      out.rewards[m] = x;
      continue;
    }
    out.rewards[m] = std::visit(overloaded{
                                    [](const ZeroOnCollision&) { return 0.0; },
                                    [&](const WinnerTakesAll&) {
                                      // Players are scanned in index order.
                                      if (winner_paid[n]) return 0.0;
                                      winner_paid[n] = true;
                                      return x;
                                    },
                                    [&](const FractionalShare& f) {
                                      return f.efficiency / static_cast<double>(occ[n]) * x;
                                    },
                                },
                                model);
  }
  for (double y : out.rewards) out.system_reward += y;
  out.collided_arms = static_cast<std::size_t>(
      std::count_if(occ.begin(), occ.end(), [](std::size_t k) { return k > 1; }));
  return out;
}

double expected_system_reward(std::span<const std::size_t> choices, std::span<const double> means,
                              const CollisionModel& model) {
  const auto occ = occupancy(choices, means.size());
  double total = 0.0;
  for (std::size_t n = 0; n < means.size(); ++n) {
    if (occ[n] == 0) continue;
    if (occ[n] == 1) {
      total += means[n];
      continue;
    }
    total += std::visit(overloaded{
                            [](const ZeroOnCollision&) { return 0.0; },
                            [&](const WinnerTakesAll&) { return means[n]; },
                            [&](const FractionalShare& f) { return f.efficiency * means[n]; },
                        },
                        model);
  }
  return total;
}

std::size_t fair_share_arm(std::span<const std::size_t> top_set, std::uint64_t exploit_slot,
                           std::size_t player, std::size_t M) {
  if (top_set.size() != M || M == 0) throw UsageError("top set must hold exactly M arms");
  return top_set[(exploit_slot + player) % M];
}

DecentralizedTrajectory run_decentralized(const Bandit& bandit, const DecentralizedConfig& config,
                                          std::uint64_t horizon, std::uint64_t seed,
                                          std::span<const std::uint64_t> checkpoints,
                                          bool record_choices) {
  const std::size_t arms = bandit.size();
  const std::size_t M = config.players;
  if (M < 1) throw UsageError("need at least one player");
  if (M > arms) throw UsageError("more players than arms");
  if (const auto* f = std::get_if<FractionalShare>(&config.collisions);
      f && !(f->efficiency >= 0.0 && f->efficiency <= 1.0))
    throw UsageError("fractional share efficiency must lie in [0, 1]");
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (checkpoints[i] < 1 || checkpoints[i] > horizon)
      throw UsageError("checkpoints must lie in [1, horizon]");
    if (i > 0 && checkpoints[i] <= checkpoints[i - 1])
      throw UsageError("checkpoints must be strictly increasing");
  }

  const auto means = bandit.true_means();
  const Ranking truth = rank_means(means);
  DecentralizedTrajectory out;
  double target_reward = 0.0;
  for (std::size_t r = 0; r < M; ++r) target_reward += means[truth.order[r]];
  for (std::size_t r = 0; r < M; ++r) {
    if (!(means[truth.order[r]] > 0.0)) {
      out.warnings.emplace_back("the M best arms should have positive means");
      break;
    }
  }

  std::vector<DseePolicy> players;
  players.reserve(M);
  for (std::size_t m = 0; m < M; ++m) {
    PolicyConfig pc = config.base;
    if (config.sharing == Sharing::Prioritized) {
      pc.objective = MthBest{m + 1};
    } else {
      pc.objective = TopSet{M, std::nullopt};
    }
    players.emplace_back(std::move(pc), arms, m);
  }

  // Targets under perfect knowledge, for counting misidentifications.
  std::vector<std::size_t> true_top(truth.order.begin(), truth.order.begin() + M);
  std::sort(true_top.begin(), true_top.end());

  Rng rng(seed);
  std::vector<double> raw(arms);
  std::vector<std::size_t> choices(M);
  std::vector<SlotKind> kinds(M);
  double reward_sum = 0.0;
  double pseudo = 0.0;
  std::uint64_t exploit_slots = 0;
  std::uint64_t explore_collisions = 0;
  std::uint64_t exploit_collisions = 0;
  std::uint64_t misidentified = 0;
  std::uint64_t explorations = 0;
  std::size_t next = 0;
  if (record_choices) {
    out.choices.reserve(horizon);
    out.kinds.reserve(horizon);
  }

  for (std::uint64_t t = 1; t <= horizon; ++t) {
    bool mistaken = false;
    for (std::size_t m = 0; m < M; ++m) {
      Decision d{};
      if (config.sharing == Sharing::FairRotation) {
        d = players[m].select_arm(t, [&](std::span<const double> est) {
          const auto mine = top_set(est, M);
          if (mine != true_top) mistaken = true;
          return fair_share_arm(mine, exploit_slots, m, M);
        });
      } else {
        d = players[m].select_arm(t);
        if (d.kind == SlotKind::Exploit && d.arm != truth.order[m]) mistaken = true;
      }
      choices[m] = d.arm;
      kinds[m] = d.kind;
    }
    // A common rule and clock keep every player in the same kind of slot.
    const SlotKind kind = kinds.front();
    for (SlotKind k : kinds)
      if (k != kind) throw std::logic_error("players disagree on the slot kind");

    for (std::size_t n = 0; n < arms; ++n) raw[n] = bandit.sample_reward(n, rng);
    const auto outcome = resolve_collisions(choices, raw, config.collisions);
    for (std::size_t m = 0; m < M; ++m) players[m].observe(t, choices[m], outcome.rewards[m], kind);

    reward_sum += outcome.system_reward;
    pseudo += target_reward - expected_system_reward(choices, means, config.collisions);
    if (kind == SlotKind::Explore) {
      ++explorations;
      if (outcome.collided_arms > 0) ++explore_collisions;
    } else {
      ++exploit_slots;
      if (outcome.collided_arms > 0) ++exploit_collisions;
      if (mistaken) ++misidentified;
    }
    if (record_choices) {
      out.choices.push_back(choices);
      out.kinds.push_back(kind);
    }
    if (next < checkpoints.size() && t == checkpoints[next]) {
      SystemCheckpoint c;
      c.t = t;
      c.system_reward = reward_sum;
      c.pseudo_regret = pseudo;
      c.explorations = explorations;
      c.exploration_collisions = explore_collisions;
      c.exploitation_collisions = exploit_collisions;
      c.misidentifications = misidentified;
      out.checkpoints.push_back(c);
      ++next;
    }
  }
  return out;
}

std::vector<DecentralizedTrajectory> run_decentralized_replications(
    const Bandit& bandit, const DecentralizedConfig& config, const ReplicationPlan& plan) {
  const auto checkpoints =
      plan.checkpoints.empty() ? default_checkpoints(plan.horizon) : plan.checkpoints;
  std::vector<DecentralizedTrajectory> out(plan.replications);
  parallel_for(plan.replications, plan.threads, [&](std::size_t r) {
    out[r] = run_decentralized(bandit, config, plan.horizon, substream_seed(plan.master_seed, r),
                               checkpoints);
  });
  return out;
}

RegretCurve aggregate(std::span<const DecentralizedTrajectory> trajectories) {
  if (trajectories.empty()) return {};
  std::vector<std::uint64_t> ts;
  for (const auto& c : trajectories.front().checkpoints) ts.push_back(c.t);
  std::vector<std::vector<double>> values;
  values.reserve(trajectories.size());
  for (const auto& tr : trajectories) {
    if (tr.checkpoints.size() != ts.size())
      throw UsageError("trajectories have different checkpoints");
    std::vector<double> series;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      if (tr.checkpoints[i].t != ts[i]) throw UsageError("trajectories have different checkpoints");
      series.push_back(tr.checkpoints[i].pseudo_regret);
    }
    values.push_back(std::move(series));
  }
  return aggregate_series(ts, values);
}

}  // namespace dsee
