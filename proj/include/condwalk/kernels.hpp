#pragma once

#include <array>
#include <cstdint>

#include "condwalk/errors.hpp"
#include "condwalk/lattice.hpp"
#include "condwalk/rng.hpp"
#include "condwalk/step_rule.hpp"

namespace condwalk {

/// Inlined stepping for the hot loops of the experiments. Produces exactly
/// the same sequence as StepRule::next driven by RngStream::step_bits: one
/// 64-bit draw per two steps, the high 31 bits first. Positions are assumed
/// to stay far from 64-bit overflow (|x| < 2^40 is plenty).
class FastStepper {
 public:
  FastStepper(const StepRule& rule, WalkKind kind)
      : rule_(&rule),
        kind_(kind),
        cache_(rule.cache_data()),
        w_(rule.cache_radius()),
        stride_(rule.cache_stride()),
        shortcut_(rule.far_shortcut()) {}

  LatticePoint next(LatticePoint x, std::uint32_t u) const {
    StepThresholds t;
    if (kind_ == WalkKind::Srw) {
      t = StepRule::srw_thresholds();
    } else if (static_cast<std::uint64_t>(x.x1 + w_) <= static_cast<std::uint64_t>(2 * w_) &&
               static_cast<std::uint64_t>(x.x2 + w_) <= static_cast<std::uint64_t>(2 * w_)) {
      t = cache_[(x.x2 + w_) * stride_ + (x.x1 + w_)];
    } else if (shortcut_ && StepRule::outside_band(u)) {
      const auto& d = kSteps[u >> 29];
      return {x.x1 + d.x1, x.x2 + d.x2};
    } else {
      t = rule_->thresholds(kind_, x);
    }
    const auto& d = kSteps[static_cast<std::size_t>(pick_direction(t, u))];
    return {x.x1 + d.x1, x.x2 + d.x2};
  }

  WalkKind kind() const { return kind_; }

  /// Inside the cache with at least `margin` cells to spare on every side.
  bool deep_inside(LatticePoint x, std::int64_t margin) const {
    const std::int64_t lim = w_ - margin;
    return x.x1 >= -lim && x.x1 <= lim && x.x2 >= -lim && x.x2 <= lim;
  }
  std::int64_t index(LatticePoint x) const { return (x.x2 + w_) * stride_ + (x.x1 + w_); }
  const StepThresholds* cache() const { return cache_; }
  std::int64_t stride() const { return stride_; }

 private:
  const StepRule* rule_;
  WalkKind kind_;
  const StepThresholds* cache_;
  std::int64_t w_;
  std::int64_t stride_;
  bool shortcut_;
};

/// Draw-level view of an RngStream for inlined loops. Construct from a
/// stream with no buffered half-draw; commit() writes the consumed count back.
class DrawCursor {
 public:
  explicit DrawCursor(RngStream& s) : s_(&s), seed_(s.seed()), gamma_(s.gamma()), i_(s.draws()) {}

  std::uint64_t next() { return detail::mix64(seed_ + (++i_) * gamma_); }
  static std::uint32_t hi31(std::uint64_t r) { return static_cast<std::uint32_t>(r >> 33); }
  static std::uint32_t lo31(std::uint64_t r) { return static_cast<std::uint32_t>((r >> 1) & 0x7fffffffU); }

  void commit() {
    s_->advance(i_ - s_->draws());
  }

 private:
  RngStream* s_;
  std::uint64_t seed_, gamma_, i_;
};

/// A walker whose draws are inlined: draw i is mix64(seed + i * gamma), as
/// in RngStream.
struct InlineWalker {
  LatticePoint p{};
  std::uint64_t seed = 0, gamma = 0, ctr = 0;

  static InlineWalker from(const RngStream& s, LatticePoint start) {
    if (s.has_pending_half()) throw ConfigError("inline walker needs an aligned stream");
    return {start, s.seed(), s.gamma(), s.draws()};
  }
  std::uint64_t draw() { return detail::mix64(seed + (++ctr) * gamma); }
  /// Brings `s` (the stream this walker was made from) to the same point.
  void commit(RngStream& s) const { s.advance(ctr - s.draws()); }
};

inline constexpr unsigned kLaneBlock = 64;

/// Steps L walkers in lockstep by `len` steps (even, at most kLaneBlock) and
/// calls visit(n) once every walker has made step n, n = n0+1 .. n0+len.
/// When all walkers are conditioned and deep inside the threshold cache,
/// they move by index arithmetic on the cache; otherwise through
/// FastStepper::next. Both give the same path as StepRule::next. With
/// Track = false, positions are only brought up to date at the end of the
/// block (for visitors that do not look at them).
template <std::size_t L, bool Track = true, class Visit>
void advance_lanes(const FastStepper& st, std::array<InlineWalker, L>& w, std::uint64_t n0, unsigned len,
                   Visit&& visit) {
  if ((len & 1) != 0 || len > kLaneBlock) throw ConfigError("lane block must be even and at most 64 steps");
  bool fast = st.kind() == WalkKind::Conditioned;
  for (std::size_t l = 0; l < L && fast; ++l) fast = st.deep_inside(w[l].p, kLaneBlock);
  std::uint32_t lo[L];
  if (fast) {
    const StepThresholds* cache = st.cache();
    const std::int64_t s = st.stride();
    const std::int64_t delta[4] = {1, s, -1, -s};
    std::int64_t idx[L];
    for (std::size_t l = 0; l < L; ++l) idx[l] = st.index(w[l].p);
    for (unsigned k = 0; k < len; k += 2) {
      for (std::size_t l = 0; l < L; ++l) {
        const std::uint64_t r = w[l].draw();
        lo[l] = DrawCursor::lo31(r);
        const auto d = static_cast<std::size_t>(pick_direction(cache[idx[l]], DrawCursor::hi31(r)));
        idx[l] += delta[d];
        if constexpr (Track) {
          w[l].p.x1 += kSteps[d].x1;
          w[l].p.x2 += kSteps[d].x2;
        }
      }
      visit(n0 + k + 1);
      for (std::size_t l = 0; l < L; ++l) {
        const auto d = static_cast<std::size_t>(pick_direction(cache[idx[l]], lo[l]));
        idx[l] += delta[d];
        if constexpr (Track) {
          w[l].p.x1 += kSteps[d].x1;
          w[l].p.x2 += kSteps[d].x2;
        }
      }
      visit(n0 + k + 2);
    }
    if constexpr (!Track) {
      for (std::size_t l = 0; l < L; ++l) w[l].p = {idx[l] % s - (s - 1) / 2, idx[l] / s - (s - 1) / 2};
    }
    return;
  }
  for (unsigned k = 0; k < len; k += 2) {
    for (std::size_t l = 0; l < L; ++l) {
      const std::uint64_t r = w[l].draw();
      lo[l] = DrawCursor::lo31(r);
      w[l].p = st.next(w[l].p, DrawCursor::hi31(r));
    }
    visit(n0 + k + 1);
    for (std::size_t l = 0; l < L; ++l) w[l].p = st.next(w[l].p, lo[l]);
    visit(n0 + k + 2);
  }
}

/// Advance `pos` by an even number of steps, calling on_step(n, position)
/// after every step (n = 1, 2, ...).
template <class OnStep>
LatticePoint walk_even(const FastStepper& st, LatticePoint pos, RngStream& rng, std::uint64_t steps, OnStep&& on_step) {
  if ((steps & 1) != 0 || rng.has_pending_half()) throw ConfigError("walk_even needs an even step count and an aligned stream");
  DrawCursor cur(rng);
  for (std::uint64_t n = 0; n < steps; n += 2) {
    const std::uint64_t r = cur.next();
    pos = st.next(pos, DrawCursor::hi31(r));
    on_step(n + 1, pos);
    pos = st.next(pos, DrawCursor::lo31(r));
    on_step(n + 2, pos);
  }
  cur.commit();
  return pos;
}

}  // namespace condwalk
