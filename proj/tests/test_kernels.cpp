#include <array>
#include <vector>

#include "condwalk/errors.hpp"
#include "condwalk/kernels.hpp"
#include "condwalk/walk.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace condwalk;
using testsupport::model;

namespace {

// Runs L lanes for `steps` steps through advance_lanes and records every
// lane's position after every step (Track) or only at block ends.
template <std::size_t L, bool Track>
std::vector<std::vector<LatticePoint>> lanes(WalkKind kind, const std::array<LatticePoint, L>& starts,
                                             std::uint64_t steps, std::uint64_t tag,
                                             std::array<RngStream, L>* streams = nullptr) {
  const FastStepper st(model().rule(), kind);
  std::array<InlineWalker, L> w;
  for (std::size_t l = 0; l < L; ++l) w[l] = InlineWalker::from(RngStream::derive(1, tag, l), starts[l]);
  std::vector<std::vector<LatticePoint>> out(L);
  for (std::size_t l = 0; l < L; ++l) out[l].push_back(starts[l]);
  for (std::uint64_t n = 0; n < steps; n += kLaneBlock) {
    const auto len = static_cast<unsigned>(std::min<std::uint64_t>(kLaneBlock, steps - n));
    advance_lanes<L, Track>(st, w, n, len, [&](std::uint64_t k) {
      CHECK(k > n);
      CHECK(k <= n + len);
      if constexpr (Track)
        for (std::size_t l = 0; l < L; ++l) out[l].push_back(w[l].p);
    });
    if constexpr (!Track)
      for (std::size_t l = 0; l < L; ++l) out[l].push_back(w[l].p);
  }
  if (streams)
    for (std::size_t l = 0; l < L; ++l) w[l].commit((*streams)[l]);
  return out;
}

}  // namespace

TEST_CASE("lanes: same paths as sample_path, fast and slow") {
  // starts deep in the cache, near its edge, and far outside it
  const std::array<LatticePoint, 3> starts{LatticePoint{1, 0}, LatticePoint{250, -3}, LatticePoint{5000, 7000}};
  for (WalkKind kind : {WalkKind::Conditioned, WalkKind::Srw}) {
    const auto got = lanes<3, true>(kind, starts, 3000, 21);
    for (std::size_t l = 0; l < 3; ++l) {
      auto r = RngStream::derive(1, 21, l);
      const auto ref = sample_path(model().rule(), kind, starts[l], 3000, r);
      CHECK(got[l] == ref.path);
    }
  }
}

TEST_CASE("lanes: untracked blocks end at the same positions") {
  const std::array<LatticePoint, 4> starts{LatticePoint{1, 0}, LatticePoint{-2, 3}, LatticePoint{0, -1},
                                           LatticePoint{100, 100}};
  const auto tracked = lanes<4, true>(WalkKind::Conditioned, starts, 2560, 5);
  const auto untracked = lanes<4, false>(WalkKind::Conditioned, starts, 2560, 5);
  for (std::size_t l = 0; l < 4; ++l) {
    REQUIRE(untracked[l].size() == 2560 / kLaneBlock + 1);
    for (std::size_t b = 0; b < untracked[l].size(); ++b) CHECK(untracked[l][b] == tracked[l][b * kLaneBlock]);
  }
}

TEST_CASE("lanes: commit leaves the stream where sample_path would") {
  std::array<RngStream, 2> s{RngStream::derive(1, 8, 0), RngStream::derive(1, 8, 1)};
  lanes<2, true>(WalkKind::Conditioned, {LatticePoint{1, 0}, LatticePoint{3, 0}}, 640, 8, &s);
  auto r = RngStream::derive(1, 8, 0);
  sample_path(model().rule(), WalkKind::Conditioned, {1, 0}, 640, r);
  CHECK(s[0].draws() == r.draws());
  CHECK(s[0].next_u64() == r.next_u64());
}

TEST_CASE("lanes: block length validation") {
  const FastStepper st(model().rule(), WalkKind::Conditioned);
  std::array<InlineWalker, 1> w{InlineWalker::from(RngStream::derive(1, 1, 1), {1, 0})};
  CHECK_THROWS_AS(advance_lanes<1>(st, w, 0, 3, [](std::uint64_t) {}), ConfigError);
  CHECK_THROWS_AS(advance_lanes<1>(st, w, 0, 66, [](std::uint64_t) {}), ConfigError);
  auto half = RngStream::derive(1, 1, 1);
  half.step_bits();
  CHECK_THROWS_AS(InlineWalker::from(half, {1, 0}), ConfigError);
}

TEST_CASE("walk_even matches sample_path") {
  const FastStepper st(model().rule(), WalkKind::Conditioned);
  auto a = RngStream::derive(4, 4, 4), b = RngStream::derive(4, 4, 4);
  std::vector<LatticePoint> got{{2, 1}};
  walk_even(st, {2, 1}, a, 1000, [&](std::uint64_t, LatticePoint p) { got.push_back(p); });
  CHECK(got == sample_path(model().rule(), WalkKind::Conditioned, {2, 1}, 1000, b).path);
  CHECK(a.draws() == b.draws());
  CHECK_THROWS_AS(walk_even(st, {2, 1}, a, 3, [](std::uint64_t, LatticePoint) {}), ConfigError);
}
