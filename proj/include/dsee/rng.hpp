#pragma once

#include <array>
#include <cstdint>
#include <optional>

namespace dsee {

/// SplitMix64 finalizer. Used for seeding and for deriving substream seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed of the substream owned by (replication, player).
///
/// seed = mix64(mix64(master ^ mix64(replication + 1)) + 0x9E3779B97F4A7C15 * (player + 1))
///
/// Distinct (replication, player) pairs map to statistically independent
/// xoshiro256** states; the mapping is fixed so runs are reproducible.
std::uint64_t substream_seed(std::uint64_t master, std::uint64_t replication,
                             std::uint64_t player = 0) noexcept;

/// xoshiro256** seeded through SplitMix64, plus the handful of variate
/// generators the reward zoo needs. Every transform is implemented here so
/// the stream does not depend on the standard library's distribution
/// implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept;

  std::uint64_t next_u64() noexcept;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform on (0, 1].
  double uniform_open_low() noexcept { return 1.0 - uniform(); }

  /// Standard normal via the Marsaglia polar method; the spare variate is
  /// cached in the generator state.
  double normal() noexcept;
  /// Gamma(shape, 1) via Marsaglia-Tsang, with the shape < 1 boost.
  double gamma(double shape) noexcept;

  using result_type = std::uint64_t;
  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }
  result_type operator()() noexcept { return next_u64(); }

 private:
  std::array<std::uint64_t, 4> s_{};
  std::optional<double> spare_normal_;
};

}  // namespace dsee
