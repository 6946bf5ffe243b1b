#include "dsee/schedule.hpp"

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

// Values within rounding of an integer are taken to be that integer, so
// exact ties such as 2 * 243^0.4 = 18 compare as ties.
double snap(double x) {
  const double r = std::round(x);
  return std::fabs(x - r) <= 1e-12 * std::max(1.0, std::fabs(x)) ? r : x;
}

}  // namespace

double DivergingRule::f(double t) const noexcept {
  switch (growth) {
    case Growth::LogLog:
      return std::log(std::log(std::max(t, 3.0)));
    case Growth::Power:
      return std::pow(t, gamma);
  }
  return 0.0;
}

void validate(const ExplorationRule& rule) {
  std::visit(overloaded{
                 [](const LogRule& r) {
                   if (!(r.w > 0.0) || !std::isfinite(r.w)) throw UsageError("log rule needs w > 0");
                 },
                 [](const DivergingRule& r) {
                   if (r.growth == DivergingRule::Growth::Power && !(r.gamma > 0.0 && r.gamma < 1.0))
                     throw UsageError("power growth needs gamma in (0, 1)");
                 },
                 [](const PolyRule& r) {
                   if (!(r.v > 0.0) || !std::isfinite(r.v)) throw UsageError("poly rule needs v > 0");
                   if (!(r.p > 1.0) || !std::isfinite(r.p)) throw UsageError("poly rule needs p > 1");
                 },
             },
             rule);
}

double exploration_target(const ExplorationRule& rule, std::uint64_t t, std::size_t arms) {
  const double tt = static_cast<double>(t);
  const double n = static_cast<double>(arms);
  const double lt = std::log(tt);
  return std::visit(overloaded{
                        [&](const LogRule& r) { return n * std::ceil(snap(r.w * lt)); },
                        [&](const DivergingRule& r) { return n * std::ceil(snap(r.f(tt) * lt)); },
                        [&](const PolyRule& r) { return snap(r.v * std::pow(tt, r.exponent())); },
                    },
                    rule);
}

bool is_exploration(const ExplorationRule& rule, std::uint64_t t, std::uint64_t count,
                    std::size_t arms) {
  if (t < 1) throw UsageError("time slots start at 1");
  // Every arm gets one observation before the first exploitation slot.
  if (t == 1 || count < arms) return true;
  return static_cast<double>(count) < exploration_target(rule, t, arms);
}

std::size_t arm_for_slot(std::uint64_t k, std::size_t arms, std::size_t offset) {
  if (k < 1) throw UsageError("exploration slots are numbered from 1");
  if (arms < 1) throw UsageError("need at least one arm");
  if (offset >= arms) throw UsageError("offset must be smaller than the arm count");
  return static_cast<std::size_t>((k - 1 + offset) % arms);
}

std::vector<ExplorationSlot> schedule_prefix(const ExplorationRule& rule, std::size_t arms,
                                             std::uint64_t horizon, std::size_t offset) {
  std::vector<ExplorationSlot> out;
  std::uint64_t count = 0;
  for (std::uint64_t t = 1; t <= horizon; ++t) {
    if (is_exploration(rule, t, count, arms)) {
      ++count;
      out.push_back({t, arm_for_slot(count, arms, offset)});
    }
  }
  return out;
}

}  // namespace dsee
