#pragma once

#include <cstddef>
#include <cstdint>
#include <variant>
#include <vector>

namespace dsee {

/// Exploration target N * ceil(w log t).
struct LogRule {
  double w;
};

/// Exploration target N * ceil(f(t) log t) for a slowly diverging f.
struct DivergingRule {
  enum class Growth {
    LogLog,  ///< f(t) = log log max(t, 3)
    Power,   ///< f(t) = t^gamma, gamma in (0, 1)
  };
  Growth growth = Growth::LogLog;
  double gamma = 0.0;

  double f(double t) const noexcept;
};

/// Exploration target v * t^exponent, where the exponent follows from the
/// highest finite moment order p: 1/p for p <= 2, 1/(1 + p/2) above.
struct PolyRule {
  double v;
  double p;

  double exponent() const noexcept { return p <= 2.0 ? 1.0 / p : 1.0 / (1.0 + p / 2.0); }
};

using ExplorationRule = std::variant<LogRule, DivergingRule, PolyRule>;

/// Throws UsageError when the rule's constants are out of range.
void validate(const ExplorationRule& rule);

/// Number of exploration slots the rule wants to have spent by time t.
double exploration_target(const ExplorationRule& rule, std::uint64_t t, std::size_t arms);

/// Whether slot t belongs to the exploration sequence, given `count`
/// exploration slots strictly before t. Slot 1 always explores, and so does
/// every slot until each arm has been played once (count < arms).
bool is_exploration(const ExplorationRule& rule, std::uint64_t t, std::uint64_t count,
                    std::size_t arms);

/// Arm (0-based) played at the k-th exploration slot (k >= 1) by a player
/// whose round-robin is shifted by `offset`.
std::size_t arm_for_slot(std::uint64_t k, std::size_t arms, std::size_t offset = 0);

struct ExplorationSlot {
  std::uint64_t t;
  std::size_t arm;

  friend bool operator==(const ExplorationSlot&, const ExplorationSlot&) = default;
};

/// Every exploration slot up to `horizon` with its assigned arm.
std::vector<ExplorationSlot> schedule_prefix(const ExplorationRule& rule, std::size_t arms,
                                             std::uint64_t horizon, std::size_t offset = 0);

}  // namespace dsee
