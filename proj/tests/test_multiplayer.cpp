#include <set>

#include "doctest.h"
#include "dsee/error.hpp"
#include "dsee/multiplayer.hpp"

using namespace dsee;

namespace {

DecentralizedConfig three_arm_config() {
  DecentralizedConfig c;
  c.players = 2;
  c.sharing = Sharing::FairRotation;
  c.collisions = ZeroOnCollision{};
  c.base.rule = LogRule{8.0};
  c.base.constants.delta = 0.3;
  return c;
}

Bandit three_arms() {
  return Bandit({ArmSpec(Bernoulli{0.9}), ArmSpec(Bernoulli{0.8}), ArmSpec(Bernoulli{0.1})});
}

}  // namespace

TEST_SUITE("multiplayer") {

TEST_CASE("collision models") {
  const std::vector<double> raw{1.0, 0.7, 0.9};
  {
    const std::vector<std::size_t> choices{0, 0, 1};
    const auto r = resolve_collisions(choices, raw, ZeroOnCollision{});
    CHECK(r.rewards == std::vector<double>{0.0, 0.0, 0.7});
    CHECK(r.system_reward == doctest::Approx(0.7));
    CHECK(r.collided_arms == 1);
  }
  for (const CollisionModel& m : {CollisionModel{ZeroOnCollision{}}, CollisionModel{WinnerTakesAll{}},
                                  CollisionModel{FractionalShare{0.5}}}) {
    const std::vector<std::size_t> choices{0, 1};
    const auto r = resolve_collisions(choices, raw, m);
    CHECK(r.rewards == std::vector<double>{1.0, 0.7});
    CHECK(r.system_reward == doctest::Approx(1.7));
  }
  {
    const std::vector<std::size_t> choices{2, 2};
    const auto r = resolve_collisions(choices, raw, WinnerTakesAll{});
    CHECK(r.rewards == std::vector<double>{0.9, 0.0});
    CHECK(r.system_reward == doctest::Approx(0.9));
  }
  {
    const std::vector<std::size_t> choices{2, 2};
    const auto r = resolve_collisions(choices, raw, FractionalShare{0.8});
    CHECK(r.rewards[0] == doctest::Approx(0.36));
    CHECK(r.system_reward <= raw[2]);
  }
  const std::vector<std::size_t> bad{5};
  CHECK_THROWS_AS(resolve_collisions(bad, raw, ZeroOnCollision{}), UsageError);
}

TEST_CASE("fair rotation") {
  const std::vector<std::size_t> top{0, 1};
  CHECK(fair_share_arm(top, 0, 0, 2) == 0);
  CHECK(fair_share_arm(top, 0, 1, 2) == 1);
  CHECK(fair_share_arm(top, 1, 0, 2) == 1);
  CHECK(fair_share_arm(top, 1, 1, 2) == 0);
  const std::vector<std::size_t> single{2};
  for (std::uint64_t k = 0; k < 5; ++k) CHECK(fair_share_arm(single, k, 0, 1) == 2);
}

TEST_CASE("rotation assigns distinct arms within a slot") {
  const std::vector<std::size_t> top{0, 2, 3};
  for (std::uint64_t k = 0; k < 10; ++k) {
    std::set<std::size_t> seen;
    for (std::size_t m = 0; m < 3; ++m) seen.insert(fair_share_arm(top, k, m, 3));
    CHECK(seen.size() == 3);
  }
}

TEST_CASE("exploration slots never collide") {
  const auto bandit = three_arms();
  const std::vector<std::uint64_t> cps{100, 1000, 5000};
  for (std::uint64_t seed : {1u, 2u, 3u, 4u}) {
    for (auto sharing : {Sharing::FairRotation, Sharing::Prioritized}) {
      auto cfg = three_arm_config();
      cfg.sharing = sharing;
      const auto run = run_decentralized(bandit, cfg, 5000, seed, cps);
      for (const auto& cp : run.checkpoints) CHECK(cp.exploration_collisions == 0);
    }
  }
}

TEST_CASE("M = N with perfect estimates has no exploit regret") {
  const Bandit bandit({ArmSpec(Bernoulli{1.0}), ArmSpec(Bernoulli{0.0})});
  auto cfg = three_arm_config();
  cfg.base.constants.delta = 0.4;
  const std::vector<std::uint64_t> cps{2000};
  const auto run = run_decentralized(bandit, cfg, 2000, 9, cps, true);
  CHECK(run.checkpoints.back().pseudo_regret == doctest::Approx(0.0));
  CHECK(run.checkpoints.back().exploitation_collisions == 0);
}

TEST_CASE("exploit collisions need disagreement") {
  const auto bandit = three_arms();
  ReplicationPlan plan;
  plan.horizon = 10000;
  plan.checkpoints = {10000};
  plan.replications = 200;
  plan.master_seed = 77;
  auto cfg = three_arm_config();
  cfg.base.rule = LogRule{1.0};  // thin exploration so mistakes happen
  const auto runs = run_decentralized_replications(bandit, cfg, plan);
  double collisions = 0.0, misid = 0.0;
  for (const auto& r : runs) {
    collisions += r.checkpoints.back().exploitation_collisions;
    misid += r.checkpoints.back().misidentifications;
  }
  CHECK(collisions / runs.size() <= misid / runs.size());
}

TEST_CASE("invalid player counts") {
  const auto bandit = three_arms();
  auto cfg = three_arm_config();
  const std::vector<std::uint64_t> cps{10};
  cfg.players = 4;
  CHECK_THROWS_AS(run_decentralized(bandit, cfg, 10, 1, cps), UsageError);
  cfg.players = 0;
  CHECK_THROWS_AS(run_decentralized(bandit, cfg, 10, 1, cps), UsageError);
}

TEST_CASE("non-positive top arms raise a warning") {
  const Bandit bandit({ArmSpec(Gaussian{0.5, 1.0}), ArmSpec(Gaussian{-0.5, 1.0}), ArmSpec(Gaussian{-1.0, 1.0})});
  const std::vector<std::uint64_t> cps{10};
  const auto run = run_decentralized(bandit, three_arm_config(), 10, 1, cps);
  CHECK_FALSE(run.warnings.empty());
}

TEST_CASE("decentralized runs are deterministic") {
  const auto bandit = three_arms();
  const std::vector<std::uint64_t> cps{100, 1000};
  const auto a = run_decentralized(bandit, three_arm_config(), 1000, 5, cps, true);
  const auto b = run_decentralized(bandit, three_arm_config(), 1000, 5, cps, true);
  CHECK(a.choices == b.choices);
  CHECK(a.checkpoints.back().system_reward == b.checkpoints.back().system_reward);
}

}  // TEST_SUITE
