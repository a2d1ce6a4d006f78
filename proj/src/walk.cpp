#include "condwalk/walk.hpp"

#include <algorithm>

#include "condwalk/errors.hpp"
#include "condwalk/race.hpp"

namespace condwalk {

std::array<NeighborProb, 4> step_distribution(WalkKind kind, LatticePoint x, const PotentialTable& table) {
  const auto nb = neighbors(x);
  std::array<NeighborProb, 4> out{};
  if (kind == WalkKind::Srw) {
    for (std::size_t i = 0; i < 4; ++i) out[i] = {nb[i], 0.25};
    return out;
  }
  if (x == kOrigin) throw DomainError("conditioned walk at the origin");
  // 4 a(x) is replaced by the neighbor sum: equal up to rounding, and the
  // probabilities then sum to 1 as computed.
  std::array<double, 4> a{};
  double s = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    a[i] = potential(nb[i], table);
    s += a[i];
  }
  for (std::size_t i = 0; i < 4; ++i) out[i] = {nb[i], a[i] / s};
  return out;
}

Trajectory sample_path(const StepRule& rule, WalkKind kind, LatticePoint start, std::uint64_t n_steps,
                       RngStream& rng) {
  if (kind == WalkKind::Conditioned && start == kOrigin) throw DomainError("conditioned walk cannot start at the origin");
  Trajectory t;
  t.kind = kind;
  t.start = start;
  t.seed = rng.key();
  t.path.reserve(n_steps + 1);
  t.path.push_back(start);
  LatticePoint x = start;
  for (std::uint64_t n = 0; n < n_steps; ++n) {
    x = rule.next(kind, x, rng.step_bits());
    t.path.push_back(x);
  }
  return t;
}

bool Target::holds(LatticePoint w) const {
  switch (kind) {
    case Kind::Point:
      return w == point;
    case Kind::ExitDisk:
      return on_or_beyond_boundary(w, kOrigin, radius);
    case Kind::EnterDisk:
      return norm2(w) <= closed_disk_threshold(radius);
  }
  return false;
}

RunResult run_until(const StepRule& rule, WalkKind kind, LatticePoint start, const Target& target, std::uint64_t horizon,
                    RngStream& rng) {
  if (horizon == 0) throw ConfigError("horizon must be at least 1");
  if (kind == WalkKind::Conditioned && start == kOrigin) throw DomainError("conditioned walk cannot start at the origin");
  if (target.kind != Target::Kind::Point && !(target.radius > 0.0)) throw ConfigError("disk radius must be positive");
  RunResult r;
  r.times.horizon = horizon;
  LatticePoint x = start;
  if (target.holds(x)) r.times.tau = 0;
  for (std::uint64_t n = 1; n <= horizon; ++n) {
    x = rule.next(kind, x, rng.step_bits());
    if (target.holds(x)) {
      if (!r.times.tau) r.times.tau = n;
      r.times.tau_plus = n;
      break;
    }
  }
  r.final = x;
  return r;
}

std::vector<MinimumAt> future_minimum_profile(const Trajectory& traj, std::span<const std::uint64_t> checkpoints) {
  if (!std::is_sorted(checkpoints.begin(), checkpoints.end()) ||
      std::adjacent_find(checkpoints.begin(), checkpoints.end()) != checkpoints.end()) {
    throw ConfigError("checkpoints must be strictly increasing");
  }
  if (!checkpoints.empty() && checkpoints.back() > traj.steps()) throw ConfigError("checkpoint beyond trajectory");
  std::vector<MinimumAt> out(checkpoints.size());
  if (checkpoints.empty()) return out;
  std::int64_t best = INT64_MAX;
  std::size_t c = checkpoints.size();
  for (std::uint64_t m = traj.steps() + 1; m-- > 0;) {
    best = std::min(best, norm2(traj.path[m]));
    while (c > 0 && checkpoints[c - 1] == m) {
      --c;
      out[c] = {m, best};
    }
    if (c == 0) break;
  }
  return out;
}

std::optional<std::uint64_t> last_exit_time(const Trajectory& traj, double u) {
  for (std::uint64_t m = traj.path.size(); m-- > 0;) {
    if (norm2_at_most(norm2(traj.path[m]), u)) return m;
  }
  return std::nullopt;
}

}  // namespace condwalk
