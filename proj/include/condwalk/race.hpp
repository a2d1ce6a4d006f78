#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "condwalk/lattice.hpp"
#include "condwalk/model.hpp"
#include "condwalk/rng.hpp"

namespace condwalk {

/// A walk run until the first of several absorbing events.
///
/// Far from every absorbing set the walk moves by box jumps: it is placed
/// directly at its exit point from the largest tabulated square that keeps
/// clear of the origin, the targets, the counted site and both disks. For
/// SRW the exit point follows the box's harmonic measure H; for the
/// conditioned walk it follows H(w) a(w) / a(z), sampled by rejection. The
/// embedded sequence of visited sets is therefore exact in law; only the
/// elapsed time inside boxes is not tracked, so a race answers "which first"
/// and "how many visits", never "when".
struct RaceSpec {
  WalkKind kind = WalkKind::Conditioned;
  LatticePoint start{};
  std::vector<LatticePoint> targets;
  /// Targets count only from step 1 on (first-return semantics).
  bool targets_from_step_one = false;
  /// Absorb on entering {norm2(w) <= inner_threshold}.
  std::optional<std::int64_t> inner_threshold;
  /// Absorb on reaching the internal boundary of B(outer_center, outer_radius)
  /// (or anything beyond it).
  std::optional<double> outer_radius;
  LatticePoint outer_center{};
  /// Site whose visits are counted (time 0 included).
  std::optional<LatticePoint> count_site;
  /// Cap on transitions (single steps plus box jumps).
  std::uint64_t horizon = 100'000'000;
  bool accelerate = true;
};

enum class RaceStop { Target, Inner, Outer, Horizon };

struct RaceOutcome {
  RaceStop stop = RaceStop::Horizon;
  std::size_t target_index = 0;
  LatticePoint final{};
  std::uint64_t visits = 0;
  std::uint64_t steps = 0;
  std::uint64_t jumps = 0;
};

/// Validates the spec (conditioned start at the origin, empty stopping
/// set) and runs it. Throws DomainError / ConfigError.
RaceOutcome run_race(const WalkModel& model, const RaceSpec& spec, RngStream& rng);

/// True if w lies on the internal boundary of B(c, r) or outside it.
bool on_or_beyond_boundary(LatticePoint w, LatticePoint c, double r);

}  // namespace condwalk
