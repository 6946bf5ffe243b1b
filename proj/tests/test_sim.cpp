#include <cmath>

#include "doctest.h"
#include "dsee/error.hpp"
#include "dsee/sim.hpp"

using namespace dsee;

namespace {

// Plays a fixed list of arms.
class Scripted final : public Policy {
 public:
  explicit Scripted(std::size_t arms, std::vector<std::size_t> plays) : arms_(arms), plays_(std::move(plays)) {}
  Decision select_arm(std::uint64_t t) override { return {plays_.at(t - 1), SlotKind::Exploit}; }
  void observe(std::uint64_t, std::size_t, double, SlotKind) override {}
  std::size_t arms() const noexcept override { return arms_; }
  std::vector<std::uint64_t> observation_counts() const override { return std::vector<std::uint64_t>(arms_); }
  std::uint64_t exploration_count() const noexcept override { return 0; }
  std::string name() const override { return "scripted"; }

 private:
  std::size_t arms_;
  std::vector<std::size_t> plays_;
};

PolicyConfig log_config(double w) {
  PolicyConfig c;
  c.rule = LogRule{w};
  c.constants.delta = 0.1;
  return c;
}

Bandit two_bernoulli() { return Bandit({ArmSpec(Bernoulli{0.9}), ArmSpec(Bernoulli{0.5})}); }

}  // namespace

TEST_SUITE("sim") {

TEST_CASE("single-arm bandit has no regret") {
  const Bandit b({ArmSpec(Gaussian{0.0, 1.0})});
  DseePolicy p(log_config(2.0), 1);
  const std::vector<std::uint64_t> cps{1, 10, 1000};
  const auto run = run_single(b, p, 1000, 3, cps);
  for (const auto& c : run.checkpoints) CHECK(c.pseudo_regret == 0.0);
}

TEST_CASE("pseudo-regret sums gaps of the plays") {
  Scripted p(2, {0, 1, 0});
  const std::vector<std::uint64_t> cps{3};
  const auto run = run_single(two_bernoulli(), p, 3, 1, cps);
  CHECK(run.checkpoints[0].pseudo_regret == doctest::Approx(0.4));
}

TEST_CASE("objective costs") {
  CostModel unit;
  CHECK(objective_cost(2, MthBest{2}, unit) == 0.0);
  CHECK(objective_cost(1, MthBest{2}, unit) == 1.0);
  CHECK(objective_cost(3, TopSet{2, std::nullopt}, unit) == 1.0);
  CHECK(objective_cost(2, TopSet{2, std::nullopt}, unit) == 0.0);
  CostModel ranked{{0.5, 0.0, 2.0}, 1.0};
  CHECK(objective_cost(1, MthBest{2}, ranked) == 0.5);
  CHECK(objective_cost(3, MthBest{2}, ranked) == 2.0);
}

TEST_CASE("pseudo-regret matches an independent replay of the choice log") {
  const auto bandit = two_bernoulli();
  const std::vector<double> means{0.9, 0.5};
  DseePolicy p(log_config(3.0), 2);
  const std::vector<std::uint64_t> cps{100, 5000, 20000};
  RunOptions opts;
  opts.record_choices = true;
  const auto run = run_single(bandit, p, 20000, 42, cps, opts);
  REQUIRE(run.choices.size() == 20000);
  double replay = 0.0;
  std::uint64_t explore_bad = 0, exploit_bad = 0;
  std::size_t next = 0;
  for (std::size_t i = 0; i < run.choices.size(); ++i) {
    replay += 0.9 - means[run.choices[i]];
    if (run.choices[i] == 1) ++(run.kinds[i] == SlotKind::Explore ? explore_bad : exploit_bad);
    if (next < cps.size() && i + 1 == cps[next]) {
      CHECK(run.checkpoints[next].pseudo_regret == replay);
      ++next;
    }
  }
  // Delta_2 * (exploration pulls of arm 1 + exploit mistakes).
  CHECK(run.checkpoints.back().pseudo_regret == doctest::Approx(0.4 * (explore_bad + exploit_bad)));
  CHECK(run.checkpoints.back().exploit_misses == exploit_bad);
}

TEST_CASE("checkpoint validation") {
  DseePolicy p(log_config(1.0), 2);
  const std::vector<std::uint64_t> late{20};
  CHECK_THROWS_AS(run_single(two_bernoulli(), p, 10, 1, late), UsageError);
  DseePolicy q(log_config(1.0), 2);
  const std::vector<std::uint64_t> unsorted{5, 3};
  CHECK_THROWS_AS(run_single(two_bernoulli(), q, 10, 1, unsorted), UsageError);
  DseePolicy r(log_config(1.0), 3);
  const std::vector<std::uint64_t> ok{5};
  CHECK_THROWS_AS(run_single(two_bernoulli(), r, 10, 1, ok), UsageError);
}

TEST_CASE("default checkpoints are quarter decades") {
  CHECK(default_checkpoints(100) == std::vector<std::uint64_t>{1, 3, 5, 10, 17, 31, 56, 100});
  CHECK(default_checkpoints(1).size() == 1);
}

TEST_CASE("aggregation") {
  const std::vector<std::uint64_t> ts{1, 2};
  SUBCASE("identical") {
    // One series per replication.
    const std::vector<std::vector<double>> v{{1.0, 4.0}, {1.0, 4.0}, {1.0, 4.0}};
    const auto c = aggregate_series(ts, v);
    CHECK(c.points[1].mean == 4.0);
    CHECK(c.points[1].std == 0.0);
    CHECK(c.points[1].reps == 3);
  }
  SUBCASE("two values") {
    const std::vector<std::vector<double>> v{{1.0, 1.0}, {3.0, 3.0}};
    const auto c = aggregate_series(ts, v);
    CHECK(c.points[0].mean == 2.0);
    CHECK(c.points[0].std == doctest::Approx(std::sqrt(2.0)));
  }
  CHECK(empirical_quantile({1.0, 2.0, 3.0, 4.0}, 0.5) == doctest::Approx(2.5));
  CHECK(empirical_quantile({5.0}, 0.05) == 5.0);
}

TEST_CASE("replications are deterministic and thread-count independent") {
  const auto bandit = two_bernoulli();
  ReplicationPlan plan;
  plan.horizon = 2000;
  plan.replications = 500;
  plan.master_seed = 99;
  const PolicyFactory make = [] { return std::make_unique<DseePolicy>(log_config(1.0), 2); };
  plan.threads = 1;
  const auto a = aggregate(std::span<const Trajectory>(run_replications(bandit, make, plan)));
  plan.threads = 3;
  const auto b = aggregate(std::span<const Trajectory>(run_replications(bandit, make, plan)));
  REQUIRE(a.points.size() == b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    CHECK(a.points[i].mean == b.points[i].mean);
    CHECK(a.points[i].std == b.points[i].std);
    CHECK(a.points[i].q95 == b.points[i].q95);
  }
}

TEST_CASE("reward seed leaves the exploration set unchanged") {
  const auto bandit = two_bernoulli();
  RunOptions opts;
  opts.record_choices = true;
  const std::vector<std::uint64_t> cps{5000};
  DseePolicy p1(log_config(1.0), 2), p2(log_config(1.0), 2);
  const auto r1 = run_single(bandit, p1, 5000, 1, cps, opts);
  const auto r2 = run_single(bandit, p2, 5000, 2, cps, opts);
  for (std::size_t i = 0; i < r1.kinds.size(); ++i) {
    REQUIRE(r1.kinds[i] == r2.kinds[i]);
    if (r1.kinds[i] == SlotKind::Explore) CHECK(r1.choices[i] == r2.choices[i]);
  }
}

TEST_CASE("parallel_for visits every index once") {
  std::vector<int> hits(1000);
  parallel_for(hits.size(), 4, [&](std::size_t i) { ++hits[i]; });
  CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
}

}  // TEST_SUITE
