#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "condwalk/lattice.hpp"
#include "condwalk/potential.hpp"
#include "condwalk/rng.hpp"
#include "condwalk/step_rule.hpp"

namespace condwalk {

struct NeighborProb {
  LatticePoint y;
  double p;
};

/// One-step law in E, N, W, S order. SRW: 1/4 each. Conditioned:
/// a(y) / (4 a(x)). Throws DomainError for a conditioned walk at the origin.
std::array<NeighborProb, 4> step_distribution(WalkKind kind, LatticePoint x, const PotentialTable& table);

/// path[0] is the start; path[n] the position after n steps.
struct Trajectory {
  WalkKind kind = WalkKind::Srw;
  LatticePoint start{};
  std::vector<LatticePoint> path;
  std::uint64_t seed = 0;  // key of the stream that produced it

  std::uint64_t steps() const { return path.empty() ? 0 : path.size() - 1; }
};

Trajectory sample_path(const StepRule& rule, WalkKind kind, LatticePoint start, std::uint64_t n_steps, RngStream& rng);

/// Stopping sets understood by run_until.
struct Target {
  enum class Kind { Point, ExitDisk, EnterDisk };
  Kind kind = Kind::Point;
  LatticePoint point{};
  double radius = 0.0;

  static Target at(LatticePoint p) { return {Kind::Point, p, 0.0}; }
  /// Internal boundary of B(r) or outside it.
  static Target exit_disk(double r) { return {Kind::ExitDisk, kOrigin, r}; }
  /// |w| <= r.
  static Target enter_disk(double r) { return {Kind::EnterDisk, kOrigin, r}; }

  bool holds(LatticePoint w) const;
};

struct StopTimes {
  std::optional<std::uint64_t> tau;       // first n >= 0 in the target
  std::optional<std::uint64_t> tau_plus;  // first n >= 1 in the target
  std::uint64_t horizon = 0;
};

struct RunResult {
  StopTimes times;
  LatticePoint final{};  // position when the walk was stopped
};

/// Walks without storing the path until tau_plus is found or the horizon is
/// spent. Throws ConfigError for horizon 0.
RunResult run_until(const StepRule& rule, WalkKind kind, LatticePoint start, const Target& target, std::uint64_t horizon,
                    RngStream& rng);

/// |w| <= u on squared norms, the one comparison shared by M_n and T_u.
inline bool norm2_at_most(std::int64_t n2, double u) { return n2 <= closed_disk_threshold(u); }

struct MinimumAt {
  std::uint64_t n;
  std::int64_t m2;  // M_n squared
  double m() const { return std::sqrt(static_cast<double>(m2)); }
};

/// M_n = min_{n <= m <= len} |S_m| at each checkpoint, by one backward sweep.
/// Throws ConfigError for unsorted or out-of-range checkpoints.
std::vector<MinimumAt> future_minimum_profile(const Trajectory& traj, std::span<const std::uint64_t> checkpoints);

/// Largest n with |S_n| <= u, or nullopt.
std::optional<std::uint64_t> last_exit_time(const Trajectory& traj, double u);

}  // namespace condwalk
