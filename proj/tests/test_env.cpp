#include <cmath>

#include "doctest.h"
#include "dsee/env.hpp"
#include "dsee/error.hpp"
#include "dsee/rng.hpp"
#include "oracles.hpp"

using namespace dsee;

TEST_SUITE("env") {

TEST_CASE("degenerate Bernoulli always pays one") {
  const ArmSpec arm(Bernoulli{1.0});
  for (std::uint64_t seed : {1u, 2u, 99u}) {
    Rng rng(seed);
    for (int i = 0; i < 100; ++i) CHECK(arm.sample(rng) == 1.0);
  }
}

TEST_CASE("invalid parameters are rejected at construction") {
  CHECK_THROWS_AS(ArmSpec(Gaussian{5.0, 0.0}), UsageError);
  CHECK_THROWS_AS(ArmSpec(Bernoulli{1.5}), UsageError);
  CHECK_THROWS_AS(ArmSpec(Bernoulli{-0.1}), UsageError);
  CHECK_THROWS_AS(ArmSpec(Exponential{0.0}), UsageError);
  CHECK_THROWS_AS(ArmSpec(Pareto{1.0, 1.0}), UsageError);  // infinite mean
  CHECK_THROWS_AS(ArmSpec(Pareto{3.0, -1.0}), UsageError);
  CHECK_THROWS_AS(ArmSpec(StudentT{1.0, 0.0}), UsageError);
  CHECK_THROWS_AS(ArmSpec(Gaussian{NAN, 1.0}), UsageError);
}

TEST_CASE("Pareto sample mean matches shape*scale/(shape-1)") {
  const ArmSpec arm(Pareto{3.0, 1.0});
  Rng rng(20240601);
  double s = 0.0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) s += arm.sample(rng);
  const double mean = s / n;
  CHECK(mean >= 1.49);
  CHECK(mean <= 1.51);
}

TEST_CASE("sample means agree with closed-form means") {
  const std::vector<ArmSpec> arms{ArmSpec(Bernoulli{0.3}), ArmSpec(Gaussian{-1.0, 2.0}),
                                  ArmSpec(Exponential{2.0}), ArmSpec(StudentT{5.0, 0.7})};
  for (const auto& arm : arms) {
    CAPTURE(arm.describe());
    Rng rng(7);
    double s = 0.0, s2 = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
      const double x = arm.sample(rng);
      s += x;
      s2 += x * x;
    }
    const double m = s / n;
    const double se = std::sqrt((s2 / n - m * m) / n);
    CHECK(std::fabs(m - arm.mean()) < 5.0 * se);
  }
}

TEST_CASE("Gaussian variates pass a coarse distribution check") {
  Rng rng(3);
  const ArmSpec arm(Gaussian{0.0, 1.0});
  const int n = 100000;
  int below = 0;
  for (int i = 0; i < n; ++i) below += arm.sample(rng) <= 1.0;
  const double expected = oracle::normal_cdf(1.0);
  CHECK(std::fabs(below / double(n) - expected) < 5.0 * std::sqrt(expected * (1 - expected) / n));
}

TEST_CASE("true means") {
  CHECK(Bandit({ArmSpec(Bernoulli{0.9}), ArmSpec(Bernoulli{0.5})}).true_means() ==
        std::vector<double>{0.9, 0.5});
  CHECK(Bandit({ArmSpec(Exponential{2.0})}).true_means()[0] == doctest::Approx(0.5));
  CHECK(Bandit({ArmSpec(Pareto{3.0, 1.0})}).true_means()[0] == doctest::Approx(1.5));
  CHECK(ArmSpec(StudentT{3.0, -0.25}).mean() == -0.25);
}

TEST_CASE("ranking and gaps") {
  SUBCASE("distinct") {
    const auto r = rank_means({0.9, 0.5, 0.8});
    CHECK(r.order == std::vector<std::size_t>{0, 2, 1});
    CHECK(r.gaps[0] == 0.0);
    CHECK(r.gaps[1] == doctest::Approx(0.1));
    CHECK(r.gaps[2] == doctest::Approx(0.4));
    CHECK(r.rank == std::vector<std::size_t>{1, 3, 2});
  }
  SUBCASE("ties keep index order") {
    const auto r = rank_means({0.5, 0.5});
    CHECK(r.order == std::vector<std::size_t>{0, 1});
    CHECK(r.gaps == std::vector<double>{0.0, 0.0});
  }
  SUBCASE("best arm second") {
    const auto r = rank_means({0.2, 0.9});
    CHECK(r.order == std::vector<std::size_t>{1, 0});
    CHECK(r.gaps[1] == doctest::Approx(0.7));
  }
}

TEST_CASE("bandit indexing") {
  const Bandit b({ArmSpec(Bernoulli{0.2}), ArmSpec(Bernoulli{0.4})});
  CHECK(b.size() == 2);
  CHECK_THROWS_AS(b.arm(2), UsageError);
  CHECK_THROWS_AS(Bandit({}), UsageError);
}

TEST_CASE("central moments") {
  CHECK(*central_moment_bound(ArmSpec(Gaussian{0.0, 1.0}), 2.0) == doctest::Approx(1.0));
  CHECK_FALSE(central_moment_bound(ArmSpec(Pareto{3.0, 1.0}), 3.0).has_value());
  CHECK(*central_moment_bound(ArmSpec(StudentT{3.0, 0.0}), 2.0) == doctest::Approx(3.0));
  CHECK(*central_moment_bound(ArmSpec(StudentT{3.0, 7.0}), 2.0) == doctest::Approx(3.0));
  CHECK_THROWS_AS(central_moment_bound(ArmSpec(Gaussian{0.0, 1.0}), 1.0), UsageError);
  // Gaussian fourth central moment 3 sigma^4; Bernoulli variance q(1-q).
  CHECK(*central_moment_bound(ArmSpec(Gaussian{1.0, 2.0}), 4.0) == doctest::Approx(48.0).epsilon(1e-8));
  CHECK(*central_moment_bound(ArmSpec(Bernoulli{0.3}), 2.0) == doctest::Approx(0.21));
  CHECK(*central_moment_bound(ArmSpec(Exponential{2.0}), 2.0) == doctest::Approx(0.25));
}

TEST_CASE("moment quadrature against an independent trapezoid rule") {
  // Fractional orders go through the numerical path.
  SUBCASE("Gaussian p = 1.5") {
    const auto got = central_moment_bound(ArmSpec(Gaussian{0.0, 1.0}), 1.5);
    const double want = oracle::trapezoid(
        [](double x) { return std::pow(std::fabs(x), 1.5) * std::exp(-x * x / 2) / std::sqrt(2 * M_PI); },
        -40, 40, 400000);
    CHECK(*got == doctest::Approx(want).epsilon(1e-7));
  }
  SUBCASE("Exponential raw p = 2.5") {
    const auto got = raw_moment_bound(ArmSpec(Exponential{1.0}), 2.5);
    CHECK(*got == doctest::Approx(std::tgamma(3.5)).epsilon(1e-8));
  }
  SUBCASE("Student-t raw p = 2 equals variance plus squared location") {
    CHECK(*raw_moment_bound(ArmSpec(StudentT{3.0, 1.0}), 2.0) == doctest::Approx(4.0).epsilon(1e-8));
    CHECK(*raw_moment_bound(ArmSpec(StudentT{3.0, 0.0}), 1.5) > 0.0);
    CHECK_FALSE(raw_moment_bound(ArmSpec(StudentT{3.0, 0.0}), 3.0).has_value());
  }
  SUBCASE("Pareto central p = 2 equals the closed-form variance") {
    // shape 4, scale 1: var = 4 / (9 * 2)
    CHECK(*central_moment_bound(ArmSpec(Pareto{4.0, 1.0}), 2.0) == doctest::Approx(4.0 / 18.0).epsilon(1e-8));
    const auto frac = central_moment_bound(ArmSpec(Pareto{4.0, 1.0}), 2.5);
    const double mean = 4.0 / 3.0;
    const double want = oracle::trapezoid(
        [&](double s) {
          // x = 1/s maps (0, 1] onto [1, inf); density 4 x^-5, dx = ds / s^2.
          if (s <= 0.0) return 0.0;
          const double x = 1.0 / s;
          return std::pow(std::fabs(x - mean), 2.5) * 4.0 * std::pow(x, -5.0) / (s * s);
        },
        0.0, 1.0, 400000);
    CHECK(*frac == doctest::Approx(want).epsilon(1e-6));
  }
}

TEST_CASE("mgf curvature") {
  // Centred Gaussian: M''(u) = sigma^2 (1 + sigma^2 u^2) e^{sigma^2 u^2 / 2}.
  const auto z = mgf_curvature_bound(ArmSpec(Gaussian{3.0, 1.0}), 1.0);
  REQUIRE(z.has_value());
  CHECK(*z == doctest::Approx(2.0 * std::exp(0.5)).epsilon(1e-12));
  CHECK(*mgf_curvature_bound(ArmSpec(Gaussian{0.0, 2.0}), 0.5) == doctest::Approx(8.0 * std::exp(0.5)));
  CHECK_FALSE(mgf_curvature_bound(ArmSpec(StudentT{3.0, 0.0}), 1.0).has_value());
  CHECK_FALSE(mgf_curvature_bound(ArmSpec(Pareto{3.0, 1.0}), 1.0).has_value());
  // Exponential(rate) needs u0 < rate.
  CHECK_FALSE(mgf_curvature_bound(ArmSpec(Exponential{1.0}), 1.5).has_value());
  CHECK(mgf_curvature_bound(ArmSpec(Exponential{2.0}), 1.0).has_value());
}

TEST_CASE("exponential mgf curvature against numerical integration") {
  const double lam = 2.0, mu = 0.5, u0 = 1.0;
  auto second = [&](double u) {
    return oracle::trapezoid(
        [&](double x) { return (x - mu) * (x - mu) * std::exp(u * (x - mu)) * lam * std::exp(-lam * x); },
        0.0, 60.0, 600000);
  };
  const double want = std::max(second(-u0), second(u0));
  CHECK(*mgf_curvature_bound(ArmSpec(Exponential{lam}), u0) == doctest::Approx(want).epsilon(1e-7));
}

TEST_CASE("mgf curvature of a Bernoulli arm against brute-force maximisation") {
  const double q = 0.9, u0 = 1.0;
  double best = 0.0;
  for (int i = -1000; i <= 1000; ++i) {
    const double u = u0 * i / 1000.0;
    // E[(X-q)^2 e^{u (X-q)}]
    const double m2 = q * (1 - q) * (1 - q) * std::exp(u * (1 - q)) + (1 - q) * q * q * std::exp(-u * q);
    best = std::max(best, m2);
  }
  CHECK(*mgf_curvature_bound(ArmSpec(Bernoulli{q}), u0) == doctest::Approx(best).epsilon(1e-9));
}

}  // TEST_SUITE
