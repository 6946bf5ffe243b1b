#include "dsee/policy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "dsee/error.hpp"

namespace dsee {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string fmt_num(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

}  // namespace

void validate(const Objective& objective, std::size_t arms) {
  std::visit(overloaded{
                 [](const BestArm&) {},
                 [&](const MthBest& o) {
                   if (o.m < 1 || o.m > arms) throw UsageError("m-th best objective needs 1 <= m <= N");
                 },
                 [&](const TopSet& o) {
                   if (o.M < 1 || o.M > arms) throw UsageError("top-set objective needs 1 <= M <= N");
                   if (o.fixed_rank && (*o.fixed_rank < 1 || *o.fixed_rank > o.M))
                     throw UsageError("top-set rank must lie in 1..M");
                 },
             },
             objective);
}

std::string describe(const Objective& objective) {
  return std::visit(overloaded{
                        [](const BestArm&) { return std::string("best"); },
                        [](const MthBest& o) { return "mth(m=" + std::to_string(o.m) + ")"; },
                        [](const TopSet& o) {
                          std::string s = "topset(M=" + std::to_string(o.M);
                          if (o.fixed_rank) s += ", rank=" + std::to_string(*o.fixed_rank);
                          return s + ")";
                        },
                    },
                    objective);
}

std::vector<std::size_t> rank_order(std::span<const double> estimates) {
  std::vector<std::size_t> order(estimates.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return estimates[a] > estimates[b]; });
  return order;
}

std::size_t rank_select(std::span<const double> estimates, const Objective& objective) {
  if (estimates.empty()) throw UsageError("rank selection over zero arms");
  validate(objective, estimates.size());
  const std::size_t rank = std::visit(overloaded{
                                          [](const BestArm&) -> std::size_t { return 1; },
                                          [](const MthBest& o) { return o.m; },
                                          [](const TopSet& o) -> std::size_t {
                                            if (!o.fixed_rank)
                                              throw UsageError("top-set objective without a fixed rank needs an external chooser");
                                            return *o.fixed_rank;
                                          },
                                      },
                                      objective);
  if (rank == 1) {
    // First maximum, i.e. lowest index among ties.
    return static_cast<std::size_t>(std::max_element(estimates.begin(), estimates.end()) -
                                    estimates.begin());
  }
  return rank_order(estimates)[rank - 1];
}

std::vector<std::size_t> top_set(std::span<const double> estimates, std::size_t M) {
  if (M < 1 || M > estimates.size()) throw UsageError("top-set size must lie in 1..N");
  auto order = rank_order(estimates);
  order.resize(M);
  std::sort(order.begin(), order.end());
  return order;
}

double ucb1_index(double mean, std::uint64_t tau, std::uint64_t t) {
  if (tau < 1) throw UsageError("UCB1 index needs at least one observation");
  if (t < 1) throw UsageError("time slots start at 1");
  return mean + std::sqrt(2.0 * std::log(static_cast<double>(t)) / static_cast<double>(tau));
}

std::optional<double> resolved_delta(const DseeConstants& k) {
  if (k.delta) return k.delta;
  if (!k.c) return std::nullopt;
  if (k.zeta && k.u0) return std::min(*k.c / 2.0, *k.zeta * *k.u0);
  return *k.c / 2.0;
}

std::optional<double> resolved_light_tail_rate(const DseeConstants& k) {
  if (k.a) return k.a;
  if (k.zeta) return 1.0 / (2.0 * *k.zeta);
  return std::nullopt;
}

DseeConstants with_derived_light_tail(const DseeConstants& k, const Bandit& bandit) {
  DseeConstants eff = k;
  if (eff.zeta) return eff;
  const double u0 = eff.u0.value_or(1.0);
  double zeta = 0.0;
  for (const auto& arm : bandit.arms()) {
    const auto z = mgf_curvature_bound(arm, u0);
    if (!z) return eff;
    zeta = std::max(zeta, *z);
  }
  eff.zeta = zeta;
  eff.u0 = u0;
  return eff;
}

TruncationParams effective_truncation(const TruncatedMean& est) {
  if (est.p > 2.0) return {est.u + 1.0, 2.0};
  return {est.u, est.p};
}

double objective_gap_window(const Objective& objective, const Ranking& truth) {
  const auto& gaps = truth.gaps;  // gaps[r - 1] is Delta_r
  const std::size_t n = gaps.size();
  constexpr double inf = std::numeric_limits<double>::infinity();
  return std::visit(overloaded{
                        [&](const BestArm&) { return n >= 2 ? gaps[1] : inf; },
                        [&](const MthBest& o) {
                          double w = inf;
                          if (o.m >= 2) w = std::min(w, gaps[o.m - 1] - gaps[o.m - 2]);
                          if (o.m < n) w = std::min(w, gaps[o.m] - gaps[o.m - 1]);
                          return w;
                        },
                        [&](const TopSet& o) { return o.M < n ? gaps[o.M] - gaps[o.M - 1] : inf; },
                    },
                    objective);
}

std::vector<std::string> check_preconditions(const PolicyConfig& config, const Bandit& bandit) {
  std::vector<std::string> issues;
  try {
    validate(config.rule);
  } catch (const UsageError& e) {
    issues.emplace_back(e.what());
  }
  try {
    validate(config.objective, bandit.size());
  } catch (const UsageError& e) {
    issues.emplace_back(e.what());
    return issues;
  }

  const Ranking truth = bandit.gaps();
  const double window = objective_gap_window(config.objective, truth);
  const DseeConstants& k = config.constants;

  if (std::holds_alternative<PlainMean>(config.estimator)) {
    if (const auto* log_rule = std::get_if<LogRule>(&config.rule)) {
      const DseeConstants eff = with_derived_light_tail(k, bandit);
      const bool all_light = std::all_of(bandit.arms().begin(), bandit.arms().end(),
                                         [](const ArmSpec& a) { return a.light_tailed(); });
      if (!all_light) issues.emplace_back("log exploration with plain means assumes light-tailed rewards");
      const auto a = resolved_light_tail_rate(eff);
      if (a && eff.zeta && !(*a > 0.0 && *a <= 1.0 / (2.0 * *eff.zeta)))
        issues.push_back("a = " + fmt_num(*a) + " outside (0, 1/(2 zeta)] = (0, " +
                         fmt_num(1.0 / (2.0 * *eff.zeta)) + "]");
      if (k.c && !(*k.c > 0.0 && *k.c < window))
        issues.push_back("c = " + fmt_num(*k.c) + " outside (0, " + fmt_num(window) + ")");
      const auto delta = resolved_delta(eff);
      if (!delta) {
        issues.emplace_back("log rule needs delta or c");
      } else {
        if (!k.c && !(*delta > 0.0 && *delta < window / 2.0))
          issues.push_back("delta = " + fmt_num(*delta) + " outside (0, " + fmt_num(window / 2.0) + ")");
        if (eff.zeta && eff.u0 && *delta > *eff.zeta * *eff.u0)
          issues.push_back("delta = " + fmt_num(*delta) + " exceeds zeta u0 = " +
                           fmt_num(*eff.zeta * *eff.u0));
      }
      if (!a) {
        issues.emplace_back("log rule needs a or zeta");
      } else if (delta && !(log_rule->w > 1.0 / (*a * *delta * *delta))) {
        issues.push_back("w = " + fmt_num(log_rule->w) + " must exceed 1/(a delta^2) = " +
                         fmt_num(1.0 / (*a * *delta * *delta)));
      }
    } else if (const auto* poly = std::get_if<PolyRule>(&config.rule)) {
      for (std::size_t n = 0; n < bandit.size(); ++n) {
        if (poly->p > 1.0 && !central_moment_bound(bandit.arm(n), poly->p))
          issues.push_back("arm " + std::to_string(n) + " has no finite moment of order " +
                           fmt_num(poly->p));
      }
    }
    return issues;
  }

  const auto& est = std::get<TruncatedMean>(config.estimator);
  if (!(est.u > 0.0)) issues.emplace_back("truncated mean needs u > 0");
  if (!(est.p > 1.0)) {
    issues.emplace_back("truncated mean needs p > 1");
    return issues;
  }
  for (std::size_t n = 0; n < bandit.size(); ++n) {
    const auto raw = raw_moment_bound(bandit.arm(n), est.p);
    if (!raw || *raw > est.u)
      issues.push_back("arm " + std::to_string(n) + ": E|X|^p = " + (raw ? fmt_num(*raw) : "inf") +
                       " exceeds u = " + fmt_num(est.u));
  }
  const auto eff = effective_truncation(est);
  if (est.gamma) {
    const double lo = (1.0 - eff.p) / eff.p;
    if (!(*est.gamma > lo && *est.gamma < 0.0))
      issues.push_back("gamma must lie in (" + fmt_num(lo) + ", 0)");
    if (!std::holds_alternative<DivergingRule>(config.rule))
      issues.emplace_back("gamma schedule needs a diverging exploration rule");
    return issues;
  }
  const auto delta = resolved_delta(k);
  if (!delta) {
    issues.emplace_back("truncated mean needs delta");
    return issues;
  }
  if (!(*delta > 0.0 && *delta < window / 2.0))
    issues.push_back("delta = " + fmt_num(*delta) + " outside (0, " + fmt_num(window / 2.0) + ")");
  if (const auto* log_rule = std::get_if<LogRule>(&config.rule); log_rule && est.u > 0.0) {
    const double a = truncation_rate(eff.u, eff.p);
    const double need = 1.0 / (a * std::pow(*delta, eff.p / (eff.p - 1.0)));
    if (!(log_rule->w > need))
      issues.push_back("w = " + fmt_num(log_rule->w) + " must exceed 1/(a delta^(p/(p-1))) = " +
                       fmt_num(need));
  }
  return issues;
}

DseePolicy::DseePolicy(PolicyConfig config, std::size_t arms, std::size_t offset)
    : config_(std::move(config)), offset_(offset) {
  if (arms < 1) throw UsageError("policy needs at least one arm");
  if (offset >= arms) throw UsageError("offset must be smaller than the arm count");
  validate(config_.rule);
  validate(config_.objective, arms);

  bool retain = false;
  std::optional<double> power;
  if (const auto* est = std::get_if<TruncatedMean>(&config_.estimator)) {
    if (!(est->u > 0.0) || !(est->p > 1.0)) throw UsageError("truncated mean needs u > 0 and p > 1");
    truncation_ = effective_truncation(*est);
    retain = true;
    power = truncation_->p;
    if (est->gamma) {
      if (!std::holds_alternative<DivergingRule>(config_.rule))
        throw UsageError("gamma schedule needs a diverging exploration rule");
      if (!(*est->gamma < 0.0)) throw UsageError("gamma must be negative");
      time_varying_ = true;
    } else if (!resolved_delta(config_.constants)) {
      throw UsageError("truncated mean needs delta");
    }
  }
  stats_.assign(arms, ArmStats(retain, power));
  estimates_.assign(arms, 0.0);
}

Decision DseePolicy::select_arm(std::uint64_t t) {
  return select_arm(t, [this](std::span<const double> est) {
    return rank_select(est, config_.objective);
  });
}

Decision DseePolicy::select_arm(std::uint64_t t, const ExploitChooser& chooser) {
  if (pending_) throw UsageError("select_arm called twice without observe");
  if (t != last_t_ + 1) throw UsageError("time must advance by exactly one slot");
  Decision d{};
  if (is_exploration(config_.rule, t, explored_, stats_.size())) {
    d = {arm_for_slot(explored_ + 1, stats_.size(), offset_), SlotKind::Explore};
  } else {
    d = {chooser(estimates(t)), SlotKind::Exploit};
    if (d.arm >= stats_.size()) throw UsageError("exploit chooser returned an invalid arm");
  }
  last_t_ = t;
  pending_ = d;
  return d;
}

void DseePolicy::observe(std::uint64_t t, std::size_t arm, double reward, SlotKind kind) {
  if (!pending_ || t != last_t_ || pending_->arm != arm || pending_->kind != kind)
    throw UsageError("observe does not match the preceding select_arm");
  pending_.reset();
  if (kind == SlotKind::Exploit) return;
  stats_[arm].record(reward);
  ++explored_;
  estimates_stale_ = true;
}

std::vector<std::uint64_t> DseePolicy::observation_counts() const {
  std::vector<std::uint64_t> out;
  out.reserve(stats_.size());
  for (const auto& s : stats_) out.push_back(s.count());
  return out;
}

double DseePolicy::truncation_delta(std::uint64_t t) const {
  const auto& est = std::get<TruncatedMean>(config_.estimator);
  if (est.gamma) {
    const auto& rule = std::get<DivergingRule>(config_.rule);
    return std::pow(rule.f(static_cast<double>(t)), *est.gamma);
  }
  return *resolved_delta(config_.constants);
}

std::span<const double> DseePolicy::estimates(std::uint64_t t) {
  if (!estimates_stale_ && !time_varying_) return estimates_;
  if (!truncation_) {
    for (std::size_t n = 0; n < stats_.size(); ++n) estimates_[n] = sample_mean(stats_[n]);
  } else {
    const double a = truncation_rate(truncation_->u, truncation_->p);
    const double delta = truncation_delta(t);
    for (std::size_t n = 0; n < stats_.size(); ++n) {
      const double eps = epsilon_schedule(stats_[n].count(), a, delta, truncation_->p);
      estimates_[n] = truncated_mean(stats_[n], truncation_->u, truncation_->p, eps);
    }
  }
  estimates_stale_ = false;
  return estimates_;
}

Ucb1Policy::Ucb1Policy(std::size_t arms) : counts_(arms, 0), sums_(arms, 0.0) {
  if (arms < 1) throw UsageError("policy needs at least one arm");
}

Decision Ucb1Policy::select_arm(std::uint64_t t) {
  if (pending_) throw UsageError("select_arm called twice without observe");
  if (t != last_t_ + 1) throw UsageError("time must advance by exactly one slot");
  last_t_ = t;
  Decision d{};
  if (initial_pulls_ < counts_.size()) {
    d = {static_cast<std::size_t>(initial_pulls_), SlotKind::Explore};
  } else {
    std::size_t best = 0;
    double best_index = -std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < counts_.size(); ++n) {
      const double idx = ucb1_index(sums_[n] / static_cast<double>(counts_[n]), counts_[n], t);
      if (idx > best_index) {
        best_index = idx;
        best = n;
      }
    }
    d = {best, SlotKind::Exploit};
  }
  pending_ = d;
  return d;
}

void Ucb1Policy::observe(std::uint64_t t, std::size_t arm, double reward, SlotKind kind) {
  if (!pending_ || t != last_t_ || pending_->arm != arm || pending_->kind != kind)
    throw UsageError("observe does not match the preceding select_arm");
  pending_.reset();
  if (kind == SlotKind::Explore) ++initial_pulls_;
  ++counts_[arm];
  sums_[arm] += reward;
}

}  // namespace dsee
