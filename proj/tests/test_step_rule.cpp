#include <cmath>

#include "condwalk/errors.hpp"
#include "condwalk/step_rule.hpp"
#include "condwalk/walk.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace condwalk;
using testsupport::model;
using testsupport::table;

TEST_CASE("step_distribution: conditioned walk at (1,0)") {
  const auto d = step_distribution(WalkKind::Conditioned, {1, 0}, table());
  CHECK(d[0].y == LatticePoint{2, 0});
  CHECK(d[0].p == doctest::Approx(0.3633802));
  CHECK(d[1].p == doctest::Approx(1.0 / kPi));
  CHECK(d[2].y == LatticePoint{0, 0});
  CHECK(d[2].p == 0.0);
  CHECK(d[3].p == doctest::Approx(1.0 / kPi));
  CHECK(std::fabs(d[0].p + d[1].p + d[2].p + d[3].p - 1.0) <= 1e-12);
}

TEST_CASE("step_distribution: SRW and far away") {
  for (auto q : step_distribution(WalkKind::Srw, {5, -7}, table())) CHECK(q.p == 0.25);
  for (auto q : step_distribution(WalkKind::Conditioned, {10000, 0}, table())) CHECK(std::fabs(q.p - 0.25) <= 1e-4);
  for (auto q : step_distribution(WalkKind::Conditioned, {6000, -8000}, table())) CHECK(std::fabs(q.p - 0.25) <= 1e-4);
  CHECK_THROWS_AS(step_distribution(WalkKind::Conditioned, kOrigin, table()), DomainError);
}

TEST_CASE("step rule: quantised thresholds track the probabilities") {
  const auto& rule = model().rule();
  for (std::int64_t x = -40; x <= 40; ++x) {
    for (std::int64_t y = -40; y <= 40; ++y) {
      if (x == 0 && y == 0) continue;
      const auto d = step_distribution(WalkKind::Conditioned, {x, y}, table());
      const auto t = rule.thresholds(WalkKind::Conditioned, {x, y});
      double c = 0;
      for (int i = 0; i < 3; ++i) {
        c += d[static_cast<std::size_t>(i)].p;
        CHECK(std::fabs(t.cut[static_cast<std::size_t>(i)] / 2147483648.0 - c) <= 1.0 / 2147483648.0);
      }
    }
  }
  CHECK(rule.thresholds(WalkKind::Srw, {3, 3}) == StepRule::srw_thresholds());
  CHECK_THROWS_AS(rule.thresholds(WalkKind::Conditioned, kOrigin), DomainError);
}

TEST_CASE("step rule: the origin is never selected") {
  const auto& rule = model().rule();
  for (auto p : kSteps) {
    const auto t = rule.thresholds(WalkKind::Conditioned, p);
    // every 31-bit value, sampled densely at the cut points
    for (std::uint32_t u : {0u, t.cut[0] - 1, t.cut[0], t.cut[1] - 1, t.cut[1], t.cut[2] - 1, t.cut[2], 0x7fffffffu}) {
      if (u > 0x7fffffffu) continue;
      CHECK(rule.next(WalkKind::Conditioned, p, u) != kOrigin);
    }
  }
}

TEST_CASE("step rule: cache and direct computation agree") {
  const StepRule small(model().table_ptr(), 8);
  const auto& big = model().rule();
  for (std::int64_t x = -30; x <= 30; ++x) {
    for (std::int64_t y = -30; y <= 30; ++y) {
      if (x == 0 && y == 0) continue;
      CHECK(small.thresholds(WalkKind::Conditioned, {x, y}) == big.thresholds(WalkKind::Conditioned, {x, y}));
    }
  }
}

TEST_CASE("kernel identities on B(100)") {
  const auto& t = table();
  double worst_sum = 0, worst_db = 0, worst_mart = 0;
  for (std::int64_t x1 = -100; x1 <= 100; ++x1) {
    for (std::int64_t x2 = -100; x2 <= 100; ++x2) {
      const LatticePoint x{x1, x2};
      if (x == kOrigin || norm2(x) > 10000) continue;
      const auto d = step_distribution(WalkKind::Conditioned, x, t);
      double s = 0, m = 0;
      bool touches_origin = false;
      for (const auto& q : d) {
        s += q.p;
        if (q.y == kOrigin) {
          touches_origin = true;
          continue;
        }
        m += q.p / potential(q.y, t);
        const auto back = step_distribution(WalkKind::Conditioned, q.y, t);
        double pyx = 0;
        for (const auto& r : back) {
          if (r.y == x) pyx = r.p;
        }
        const double ax = potential(x, t), ay = potential(q.y, t);
        worst_db = std::max(worst_db, std::fabs(ax * ax * q.p - ay * ay * pyx));
      }
      worst_sum = std::max(worst_sum, std::fabs(s - 1.0));
      if (!touches_origin) worst_mart = std::max(worst_mart, std::fabs(m - 1.0 / potential(x, t)));
    }
  }
  CHECK(worst_sum <= 1e-12);
  CHECK(worst_db <= 1e-12);
  CHECK(worst_mart <= 1e-12);
}
