#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "condwalk/lattice.hpp"
#include "condwalk/potential.hpp"

namespace condwalk {

/// Cumulative cut points of the four-way step distribution (E, N, W, S),
/// scaled to 2^31. A 31-bit uniform u selects direction
/// (u >= cut[0]) + (u >= cut[1]) + (u >= cut[2]).
struct StepThresholds {
  std::array<std::uint32_t, 3> cut{};
  friend bool operator==(const StepThresholds&, const StepThresholds&) = default;
};

inline constexpr std::uint32_t kStepScale = 0x80000000U;  // 2^31

inline Direction pick_direction(const StepThresholds& t, std::uint32_t bits31) {
  const unsigned d = static_cast<unsigned>(bits31 >= t.cut[0]) + static_cast<unsigned>(bits31 >= t.cut[1]) +
                     static_cast<unsigned>(bits31 >= t.cut[2]);
  return static_cast<Direction>(d);
}

/// The quantised inverse-CDF step rule shared by every sampler, with a
/// precomputed cache of conditioned-walk thresholds on the square
/// [-W, W]^2. Cached and on-the-fly thresholds are produced by the same
/// function, so trajectories do not depend on the cache size.
class StepRule {
 public:
  StepRule(std::shared_ptr<const PotentialTable> table, std::int64_t cache_radius);

  /// Throws DomainError for a conditioned walk at the origin.
  StepThresholds thresholds(WalkKind kind, LatticePoint x) const;

  LatticePoint next(WalkKind kind, LatticePoint x, std::uint32_t bits31) const {
    return step(x, pick_direction(thresholds(kind, x), bits31));
  }

  const PotentialTable& table() const { return *table_; }

  std::int64_t cache_radius() const { return radius_; }
  std::int64_t cache_stride() const { return 2 * radius_ + 1; }
  bool in_cache(LatticePoint x) const {
    return x.x1 >= -radius_ && x.x1 <= radius_ && x.x2 >= -radius_ && x.x2 <= radius_;
  }
  /// Flat index of a cached site.
  std::int64_t cache_index(LatticePoint x) const { return (x.x2 + radius_) * cache_stride() + (x.x1 + radius_); }
  const StepThresholds* cache_data() const { return cache_.data(); }

  /// Outside the cache, every cut lies within kBand of a multiple of 2^29,
  /// so a uniform u with (u + kBand) mod 2^29 >= 2 kBand selects direction
  /// u >> 29 without computing thresholds. Verified at construction on the
  /// cache rim with a 4x margin (the deviation decays like 1/(|x| ln |x|));
  /// false for caches too small for the margin to hold.
  static constexpr std::uint32_t kBand = 1U << 22;
  bool far_shortcut() const { return far_shortcut_; }
  static bool outside_band(std::uint32_t u) { return ((u + kBand) & (kStepScale / 4 - 1)) >= 2 * kBand; }

  /// Thresholds of the conditioned walk computed directly from a(.).
  static StepThresholds conditioned_thresholds(const std::array<double, 4>& neighbor_potentials);
  static constexpr StepThresholds srw_thresholds() {
    return StepThresholds{{kStepScale / 4, kStepScale / 2, kStepScale / 4 * 3}};
  }

 private:
  StepThresholds compute(LatticePoint x) const;

  std::shared_ptr<const PotentialTable> table_;
  std::int64_t radius_;
  std::vector<StepThresholds> cache_;
  bool far_shortcut_ = false;
};

}  // namespace condwalk
