#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dsee/env.hpp"

namespace dsee::bounds {

enum class CheckStatus { Pass, Fail, Vacuous };
const char* to_string(CheckStatus s);

/// One grid point of a concentration check. A point fails only when the
/// empirical frequency exceeds the bound by more than three binomial
/// standard errors; points whose bound is >= 1 say nothing and are vacuous.
struct CheckRow {
  std::uint64_t sample_size = 0;
  double delta = 0.0;
  double empirical = 0.0;
  double bound = 0.0;
  double std_error = 0.0;
  std::size_t reps = 0;
  CheckStatus status = CheckStatus::Vacuous;
};

struct CheckReport {
  std::string lemma;
  std::string distribution;
  std::vector<CheckRow> rows;
  std::vector<std::string> notes;

  bool passed() const noexcept;
};

CheckStatus judge(double empirical, double bound, std::size_t reps);

/// Constants of the light-tailed deviation bound. zeta defaults to
/// mgf_curvature_bound(dist, u0).
struct HoeffdingConstants {
  double a;
  double u0 = 1.0;
  std::optional<double> zeta;
};

/// Problems with (a, delta) relative to the validity window a in
/// (0, 1/(2 zeta)], delta in [0, zeta u0]; empty when all hold.
std::vector<std::string> hoeffding_window_issues(const ArmSpec& dist, const HoeffdingConstants& k,
                                                 std::span<const double> deltas);

/// Frequency of |mean_s - theta| >= delta against 2 exp(-a delta^2 s).
/// Throws UsageError when the constants leave the validity window.
CheckReport verify_hoeffding(const ArmSpec& dist, const HoeffdingConstants& k,
                             std::span<const double> deltas, std::span<const std::uint64_t> sizes,
                             std::size_t reps, std::uint64_t seed, unsigned threads = 0);

/// Frequency of |mean_t - theta| >= delta against the moment bound
/// B_p m_p delta^-p t^(1-p) (p <= 2) or t^(-p/2) (p > 2).
/// Throws Unavailable when the p-th central moment is infinite.
CheckReport verify_mz(const ArmSpec& dist, double p, std::span<const double> deltas,
                      std::span<const std::uint64_t> sizes, std::size_t reps, std::uint64_t seed,
                      unsigned threads = 0);

/// Frequency of |truncated mean - theta| > 4 u^(1/p) (log(1/eps)/s)^((p-1)/p)
/// against 2 eps. Throws UsageError for eps outside (0, 1/2], p outside
/// (1, 2] or E|X|^p > u.
CheckReport verify_truncated(const ArmSpec& dist, double u, double p, double eps,
                             std::span<const std::uint64_t> sizes, std::size_t reps,
                             std::uint64_t seed, unsigned threads = 0);

}  // namespace dsee::bounds
