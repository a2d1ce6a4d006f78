#include "condwalk/race.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "condwalk/errors.hpp"

namespace condwalk {

namespace {

std::int64_t abs64(std::int64_t v) { return v < 0 ? -v : v; }

struct Geometry {
  const RaceSpec& spec;
  std::int64_t outer_t = 0;  // floor(R^2)

  bool at_outer(LatticePoint w) const {
    if (!spec.outer_radius) return false;
    const std::int64_t d1 = abs64(w.x1 - spec.outer_center.x1);
    const std::int64_t d2 = abs64(w.x2 - spec.outer_center.x2);
    return (d1 + 1) * (d1 + 1) + d2 * d2 > outer_t || d1 * d1 + (d2 + 1) * (d2 + 1) > outer_t;
  }

  bool at_inner(LatticePoint w) const { return spec.inner_threshold && norm2(w) <= *spec.inner_threshold; }

  // Closed box of half-width k around z is clear of every absorbing set.
  bool box_fits(LatticePoint z, std::int64_t k) const {
    if (spec.kind == WalkKind::Conditioned && inf_norm(z) <= k) return false;
    for (const auto& t : spec.targets) {
      if (inf_norm(z - t) <= k) return false;
    }
    if (spec.count_site && inf_norm(z - *spec.count_site) <= k) return false;
    if (spec.inner_threshold) {
      const std::int64_t d1 = std::max<std::int64_t>(abs64(z.x1) - k, 0);
      const std::int64_t d2 = std::max<std::int64_t>(abs64(z.x2) - k, 0);
      if (d1 * d1 + d2 * d2 <= *spec.inner_threshold) return false;
    }
    if (spec.outer_radius) {
      const std::int64_t d1 = abs64(z.x1 - spec.outer_center.x1) + k + 1;
      const std::int64_t d2 = abs64(z.x2 - spec.outer_center.x2) + k + 1;
      if (d1 * d1 + d2 * d2 > outer_t) return false;
    }
    return true;
  }
};

}  // namespace

bool on_or_beyond_boundary(LatticePoint w, LatticePoint c, double r) {
  const std::int64_t t = closed_disk_threshold(r);
  const std::int64_t d1 = abs64(w.x1 - c.x1);
  const std::int64_t d2 = abs64(w.x2 - c.x2);
  return (d1 + 1) * (d1 + 1) + d2 * d2 > t || d1 * d1 + (d2 + 1) * (d2 + 1) > t;
}

RaceOutcome run_race(const WalkModel& model, const RaceSpec& spec, RngStream& rng) {
  if (spec.kind == WalkKind::Conditioned && spec.start == kOrigin) {
    throw DomainError("conditioned walk cannot start at the origin");
  }
  if (spec.targets.empty() && !spec.inner_threshold && !spec.outer_radius && spec.horizon == 0) {
    throw ConfigError("race has no stopping rule");
  }
  if (spec.outer_radius && !(*spec.outer_radius > 0.0)) throw ConfigError("outer radius must be positive");

  Geometry geo{spec};
  if (spec.outer_radius) geo.outer_t = closed_disk_threshold(*spec.outer_radius);

  const StepRule& rule = model.rule();
  const BoxExits& boxes = model.boxes();
  const double excess = model.table().max_excess_over_radial();

  RaceOutcome out;
  LatticePoint pos = spec.start;
  auto absorbed = [&](bool initial) {
    if (spec.count_site && pos == *spec.count_site) ++out.visits;
    if (!(initial && spec.targets_from_step_one)) {
      for (std::size_t i = 0; i < spec.targets.size(); ++i) {
        if (pos == spec.targets[i]) {
          out.stop = RaceStop::Target;
          out.target_index = i;
          return true;
        }
      }
    }
    if (geo.at_inner(pos)) {
      out.stop = RaceStop::Inner;
      return true;
    }
    if (geo.at_outer(pos)) {
      out.stop = RaceStop::Outer;
      return true;
    }
    return false;
  };

  if (absorbed(true)) {
    out.final = pos;
    return out;
  }

  for (std::uint64_t n = 0; n < spec.horizon; ++n) {
    const BoxExitTable* box = nullptr;
    if (spec.accelerate && geo.box_fits(pos, 2)) {
      box = boxes.largest_fitting([&](std::int64_t k) { return geo.box_fits(pos, k); });
    }
    if (box == nullptr) {
      pos = rule.next(spec.kind, pos, rng.step_bits());
      ++out.steps;
    } else if (spec.kind == WalkKind::Srw) {
      pos = pos + box->sample(rng.next_u64());
      ++out.jumps;
    } else {
      const std::int64_t k = box->half_width();
      const std::int64_t m1 = abs64(pos.x1) + k;
      const std::int64_t m2 = abs64(pos.x2) + k;
      const double bound =
          potential_radius(std::sqrt(static_cast<double>(m1 * m1 + m2 * m2))) + excess + 1e-12;
      for (;;) {
        const LatticePoint w = pos + box->sample(rng.next_u64());
        const double aw = model.a(w);
        if (aw > bound) throw NumericalFailure("box rejection bound violated at " + to_string(w));
        if (rng.next_double() * bound < aw) {
          pos = w;
          break;
        }
      }
      ++out.jumps;
    }
    if (absorbed(false)) {
      out.final = pos;
      return out;
    }
  }
  out.stop = RaceStop::Horizon;
  out.final = pos;
  return out;
}

}  // namespace condwalk
