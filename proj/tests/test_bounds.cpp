#include <cmath>

#include "doctest.h"
#include "dsee/bounds.hpp"
#include "dsee/error.hpp"
#include "dsee/verify.hpp"
#include "oracles.hpp"

using namespace dsee;
using namespace dsee::bounds;

namespace {

LossProfile two_arm(double gap) { return gap_profile(rank_means({gap, 0.0})); }

}  // namespace

TEST_SUITE("bounds") {

TEST_CASE("log bound") {
  const auto prof = two_arm(0.5);
  CHECK(prof.worst() == 0.5);
  CHECK(bound_log(prof, 1.0, 0.4, 10.0, 100) == doctest::Approx(23.5 + 2.0 * 2.0 * 0.5 * (1.0 + 1.0 / 0.6)));
  CHECK(bound_log(prof, 1.0, 0.4, 10.0, 1) == doctest::Approx(2.0 * 2.0 * 0.5 * (1.0 + 1.0 / 0.6)));
  double prev = 0.0;
  for (std::uint64_t T = 1; T < 10000000; T = T * 3 + 1) {
    const double b = bound_log(prof, 1.0, 0.4, 10.0, T);
    CHECK(b >= prev);
    prev = b;
  }
  CHECK_THROWS_AS(bound_log(prof, 1.0, 0.4, 5.0, 100), UsageError);  // a delta^2 w < 1
}

TEST_CASE("diverging start against a linear scan") {
  const auto loglog = [](double t) { return std::log(std::log(std::max(t, 3.0))); };
  const auto root = [](double t) { return std::sqrt(t); };
  CHECK(diverging_start(root, 1.0, 0.4, 2.0) == 157);
  CHECK(diverging_start(root, 1.0, 0.4, 2.0) == oracle::scan_start(root, 1.0, 0.4, 2.0, 100000));
  CHECK(diverging_start(loglog, 1.0, 1.0, 2.0) == 1619);
  CHECK(diverging_start(loglog, 1.0, 1.0, 2.0) == oracle::scan_start(loglog, 1.0, 1.0, 2.0, 100000));
  for (double b : {1.1, 1.5, 3.0})
    CHECK(diverging_start(root, 0.7, 0.3, b) == oracle::scan_start(root, 0.7, 0.3, b, 1000000));
  // 0.16 log log t >= 2 needs t beyond double range.
  CHECK_THROWS_AS(diverging_start(loglog, 1.0, 0.4, 2.0), Unavailable);
}

TEST_CASE("diverging bound constants") {
  const auto prof = two_arm(0.5);
  const auto huge = [](double) { return 1e9; };
  CHECK(diverging_start(huge, 1.0, 0.4, 2.0) == 1);
  CHECK(bound_diverging(prof, huge, 1.0, 0.4, 2.0, 1) == doctest::Approx(1.0 + 1.0));
  CHECK(bound_diverging(prof, huge, 1.0, 0.4, 3.0, 1) == doctest::Approx(1.0 + 0.5));
  const auto root = [](double t) { return std::sqrt(t); };
  const double t0 = 157.0;
  CHECK(bound_diverging(prof, root, 1.0, 0.4, 2.0, 100) ==
        doctest::Approx(std::ceil(10.0 * std::log(100.0)) * 0.5 + t0 + 1.0 / t0));
}

TEST_CASE("heavy-tail bound") {
  // 0.5 * 18 * 2 * 1 * (0.25)^-2 * 1 * (2 * 9 + 1) + ceil(10)
  CHECK(bound_heavy(0.5, 0.5, 2.0, 1.0, 1.0, 100) == doctest::Approx(5482.0));
  const double lead = 0.5 * 36.0 * 16.0;
  CHECK(bound_heavy(0.5, 0.5, 2.0, 1.0, 1.0, 1) == doctest::Approx(lead + 1.0));
  // The two exponent branches meet at p = 2.
  const double below = bound_heavy(0.5, 0.5, 2.0 - 1e-9, 1.0, 1.0, 1000);
  const double above = bound_heavy(0.5, 0.5, 2.0 + 1e-9, 1.0, 1.0, 1000);
  CHECK(below == doctest::Approx(above).epsilon(1e-6));
  CHECK(mz_constant(2.0) == doctest::Approx(36.0));
  CHECK_THROWS_AS(bound_heavy(0.5, 0.5, 2.0, INFINITY, 1.0, 10), Unavailable);
}

TEST_CASE("truncated bound") {
  const auto prof = two_arm(0.5);
  CHECK(bound_truncated(prof, 1.0 / 16.0, 0.4, 2.0, 200.0, 100) == doctest::Approx(465.0));
  CHECK(bound_truncated(prof, 1.0 / 16.0, 0.4, 2.0, 200.0, 1) == doctest::Approx(4.0));
  for (std::uint64_t T : {1u, 10u, 1000u})
    CHECK(bound_truncated(prof, 1.0, 0.4, 2.0, 10.0, T) == doctest::Approx(bound_log(prof, 1.0, 0.4, 10.0, T)));
  // p = 1.5 raises delta to the third power.
  CHECK(bound_truncated(prof, 1.0, 0.5, 1.5, 10.0, 1) ==
        doctest::Approx(2.0 * 2.0 * 0.5 * (1.0 + 1.0 / (0.125 * 10.0 - 1.0))));
}

TEST_CASE("cost profiles") {
  const auto p = cost_profile(3, MthBest{2}, CostModel{});
  CHECK(p.losses.size() == 2);
  CHECK(p.total() == 2.0);
  CHECK(cost_profile(3, TopSet{2, std::nullopt}, CostModel{}).losses.size() == 1);
}

TEST_CASE("deviation bounds") {
  CHECK(hoeffding_bound(0.15, 0.5, 100) == doctest::Approx(2.0 * std::exp(-3.75)));
  CHECK(hoeffding_bound(0.15, 0.0, 100) == 2.0);
  CHECK(mz_deviation_bound(2.0, 1.0, 1.0, 100) == doctest::Approx(0.36));
  CHECK(mz_deviation_bound(2.0, 1.0, 1.0, 10) == doctest::Approx(3.6));
  CHECK(mz_deviation_bound(4.0, 1.0, 1.0, 100) == doctest::Approx(std::pow(18.0, 2.0) * 16.0 / 10000.0));
  CHECK(truncated_radius(1.0, 2.0, 0.01, 64) == doctest::Approx(4.0 * std::sqrt(std::log(100.0) / 64.0)));
  CHECK(truncated_radius(1.0, 2.0, 0.01, 64) == doctest::Approx(1.0730).epsilon(1e-4));
}

TEST_CASE("policy bound overlay picks the matching theorem") {
  const Bandit b({ArmSpec(Bernoulli{0.9}), ArmSpec(Bernoulli{0.5})});
  PolicyConfig c;
  c.rule = LogRule{60.0};
  c.constants = with_derived_light_tail(DseeConstants{}, b);
  c.constants.delta = 0.1;
  const auto got = policy_regret_bound(c, b, CostModel{}, 1000);
  REQUIRE(got.has_value());
  const double a = *resolved_light_tail_rate(c.constants);
  CHECK(*got == doctest::Approx(bound_log(gap_profile(b.gaps()), a, 0.1, 60.0, 1000)));
  c.rule = LogRule{1.0};  // a delta^2 w < 1
  CHECK_FALSE(policy_regret_bound(c, b, CostModel{}, 1000).has_value());
}

}  // TEST_SUITE

TEST_SUITE("verify") {

TEST_CASE("Hoeffding verifier on a standard Gaussian") {
  const ArmSpec g(Gaussian{0.0, 1.0});
  const std::vector<double> deltas{0.0, 0.5};
  const std::vector<std::uint64_t> sizes{1, 100};
  const auto rep = verify_hoeffding(g, {0.15, 1.0, std::nullopt}, deltas, sizes, 20000, 17);
  CHECK(rep.passed());
  REQUIRE(rep.rows.size() == 4);
  for (const auto& r : rep.rows) {
    CAPTURE(r.sample_size);
    CAPTURE(r.delta);
    if (r.delta == 0.0 || r.sample_size == 1) CHECK(r.status == CheckStatus::Vacuous);
    if (r.delta == 0.5 && r.sample_size == 100) {
      CHECK(r.bound == doctest::Approx(0.0470).epsilon(1e-3));
      // Exact probability 2 Phi(-5).
      const double exact = 2.0 * oracle::normal_cdf(-0.5 * std::sqrt(100.0));
      CHECK(exact < 1e-6);
      CHECK(r.empirical <= exact + 5.0 * std::sqrt(exact / 20000) + 1e-4);
      CHECK(r.status == CheckStatus::Pass);
    }
  }
}

TEST_CASE("Hoeffding frequencies agree with the normal CDF") {
  const ArmSpec g(Gaussian{0.0, 1.0});
  const std::vector<double> deltas{0.1, 0.2};
  const std::vector<std::uint64_t> sizes{25, 100};
  const std::size_t reps = 40000;
  const auto rep = verify_hoeffding(g, {0.15, 1.0, std::nullopt}, deltas, sizes, reps, 5);
  for (const auto& r : rep.rows) {
    const double exact = 2.0 * oracle::normal_cdf(-r.delta * std::sqrt(double(r.sample_size)));
    CHECK(std::fabs(r.empirical - exact) <= 5.0 * std::sqrt(exact * (1 - exact) / reps));
  }
}

TEST_CASE("Hoeffding verifier refuses constants outside the window") {
  const ArmSpec g(Gaussian{0.0, 1.0});
  const std::vector<double> deltas{0.1};
  const std::vector<std::uint64_t> sizes{10};
  CHECK_THROWS_AS(verify_hoeffding(g, {5.0, 1.0, std::nullopt}, deltas, sizes, 10, 1), UsageError);
  CHECK_FALSE(hoeffding_window_issues(g, {5.0, 1.0, std::nullopt}, deltas).empty());
  const std::vector<double> wide{10.0};  // beyond zeta u0
  CHECK_FALSE(hoeffding_window_issues(g, {0.1, 1.0, std::nullopt}, wide).empty());
  CHECK_THROWS_AS(verify_hoeffding(ArmSpec(StudentT{3.0, 0.0}), {0.1, 1.0, std::nullopt}, deltas, sizes, 10, 1),
                  UsageError);
}

TEST_CASE("moment verifier on Student-t") {
  const ArmSpec t3(StudentT{3.0, 0.0});
  const std::vector<double> deltas{1.0};
  const std::vector<std::uint64_t> sizes{10, 1000};
  const auto rep = verify_mz(t3, 2.0, deltas, sizes, 100000, 23);
  CHECK(rep.passed());
  REQUIRE(rep.rows.size() == 2);
  CHECK(rep.rows[0].status == CheckStatus::Vacuous);
  CHECK(rep.rows[1].bound == doctest::Approx(36.0 * 3.0 / 1000.0));
  CHECK(rep.rows[1].empirical <= 0.036);
  CHECK_THROWS_AS(verify_mz(t3, 3.0, deltas, sizes, 10, 1), Unavailable);
}

TEST_CASE("truncated-mean verifier") {
  const ArmSpec t3(StudentT{3.0, 0.0});
  const std::vector<std::uint64_t> sizes{64};
  const auto rep = verify_truncated(t3, 3.0, 2.0, 0.01, sizes, 100000, 29);
  REQUIRE(rep.rows.size() == 1);
  const auto& r = rep.rows[0];
  CHECK(r.bound == doctest::Approx(0.02));
  CHECK(r.empirical <= 0.02 + 3.0 * r.std_error);
  CHECK(rep.passed());
  const auto half = verify_truncated(t3, 3.0, 2.0, 0.5, sizes, 1000, 29);
  CHECK(half.rows[0].status == CheckStatus::Vacuous);
  CHECK_THROWS_AS(verify_truncated(t3, 2.0, 2.0, 0.01, sizes, 10, 1), UsageError);  // E X^2 = 3 > u
  CHECK_THROWS_AS(verify_truncated(t3, 3.0, 2.0, 0.7, sizes, 10, 1), UsageError);
}

TEST_CASE("judging") {
  CHECK(judge(0.5, 1.0, 100) == CheckStatus::Vacuous);
  CHECK(judge(0.01, 0.02, 100) == CheckStatus::Pass);
  CHECK(judge(0.5, 0.02, 10000) == CheckStatus::Fail);
  CHECK(std::string(to_string(CheckStatus::Vacuous)) == "skipped");
}

}  // TEST_SUITE
