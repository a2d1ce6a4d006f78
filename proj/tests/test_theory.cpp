#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "condwalk/errors.hpp"
#include "condwalk/theory.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace condwalk;
using testsupport::table;

namespace {
const double pi = std::numbers::pi;
}

// Hand values: a(1,0) = 1, a(1,1) = 4/pi, a(2,0) = 4 - 8/pi.
TEST_CASE("theory: closed forms at small points") {
  const auto& t = table();
  CHECK(return_prob({1, 0}, t) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(return_prob({0, -1}, t) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(return_prob({1, 1}, t) == doctest::Approx(1.0 - pi / 8.0).epsilon(1e-12));
  CHECK(hit_prob({1, 0}, {-1, 0}, t) == doctest::Approx(4.0 / pi - 1.0).epsilon(1e-12));
  // (1,0) -> (0,1): difference (1,-1), a = 4/pi
  CHECK(hit_prob({1, 0}, {0, 1}, t) == doctest::Approx(1.0 - 2.0 / pi).epsilon(1e-12));
  CHECK(green({1, 0}, {1, 0}, t) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(green({1, 1}, {1, 1}, t) == doctest::Approx(8.0 / pi).epsilon(1e-12));
}

TEST_CASE("theory: green and return probability are consistent") {
  const auto& t = table();
  for (LatticePoint x : {LatticePoint{1, 0}, LatticePoint{1, 1}, LatticePoint{5, 3}, LatticePoint{17, -40}}) {
    // visits to x from x = 1 / (1 - return probability)
    CHECK(green(x, x, t) == doctest::Approx(1.0 / (1.0 - return_prob(x, t))).epsilon(1e-12));
  }
  // G(x,y) = P_x[hit y] * G(y,y)
  const LatticePoint x{5, 1}, y{-2, 7};
  CHECK(green(x, y, t) == doctest::Approx(hit_prob(x, y, t) * green(y, y, t)).epsilon(1e-12));
  // reversibility with respect to a^2: a(x)^2 G(x,y) = a(y)^2 G(y,x)
  std::mt19937_64 gen(7);
  std::uniform_int_distribution<std::int64_t> c(-300, 300);
  for (int i = 0; i < 100; ++i) {
    const LatticePoint p{c(gen), c(gen)}, q{c(gen), c(gen)};
    if (p == kOrigin || q == kOrigin) continue;
    const double ap = potential(p, t), aq = potential(q, t);
    CHECK(ap * ap * green(p, q, t) == doctest::Approx(aq * aq * green(q, p, t)).epsilon(1e-12));
    CHECK(green(p, q, t) > 0.0);
    if (p != q) {
      CHECK(hit_prob(p, q, t) >= 0.0);
      CHECK(hit_prob(p, q, t) <= 1.0);
    }
  }
}

TEST_CASE("theory: hitting far points tends to one half") {
  const auto& t = table();
  double prev = 1.0;
  for (std::int64_t d : {10, 100, 1000, 100000}) {
    // a(x) = 1 and a(y) - a(x - y) > 0 shrinks with d
    const double h = hit_prob({1, 0}, {d, 0}, t);
    CHECK(h > 0.5);
    CHECK(h < prev);
    prev = h;
  }
  CHECK(prev == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("theory: domain errors") {
  const auto& t = table();
  CHECK_THROWS_AS(return_prob(kOrigin, t), DomainError);
  CHECK_THROWS_AS(hit_prob({1, 0}, {1, 0}, t), DomainError);
  CHECK_THROWS_AS(hit_prob({1, 0}, kOrigin, t), DomainError);
  CHECK_THROWS_AS(green(kOrigin, {1, 0}, t), DomainError);
  CHECK_THROWS_AS(escape_prob({5, 0}, 10.0, t), DomainError);
  CHECK_THROWS_AS(escape_prob({5, 0}, 0.0, t), DomainError);
  CHECK_THROWS_AS(annulus_escape_prob({5, 0}, 10.0, 100.0, t), DomainError);
  CHECK_THROWS_AS(annulus_escape_prob({100, 0}, 10.0, 100.0, t), DomainError);
  CHECK_THROWS_AS(annulus_escape_prob({20, 0}, 100.0, 10.0, t), DomainError);
  CHECK_THROWS_AS(srw_exit_before_hit(kOrigin, kOrigin, 100.0, t), DomainError);
  CHECK_THROWS_AS(srw_exit_before_hit({5, 0}, {99, 0}, 100.0, t), DomainError);
  CHECK_THROWS_AS(srw_exit_before_hit({500, 0}, kOrigin, 100.0, t), DomainError);
  CHECK_THROWS_AS(lclt_prediction(1, {1, 0}, t), DomainError);
  CHECK_THROWS_AS(lclt_prediction(100, kOrigin, t), DomainError);
}

TEST_CASE("theory: brackets contain the value and shrink with scale") {
  const auto& t = table();
  auto inside = [](const BracketedValue& b) {
    return b.sys_lo <= b.value && b.value <= b.sys_hi && b.sys_lo >= 0.0 && b.sys_hi <= 1.0;
  };
  const auto e1 = escape_prob({100, 0}, 10.0, t), e2 = escape_prob({1000, 0}, 100.0, t);
  CHECK(inside(e1));
  CHECK(inside(e2));
  CHECK(e2.width() < e1.width());
  CHECK(escape_prob({100, 0}, 10.0, t, 0.0).width() == 0.0);

  const auto a1 = annulus_escape_prob({32, 0}, 10.0, 1000.0, t), a2 = annulus_escape_prob({320, 0}, 100.0, 10000.0, t);
  CHECK(inside(a1));
  CHECK(inside(a2));
  CHECK(a2.width() < a1.width());

  const auto s1 = srw_exit_before_hit({10, 0}, kOrigin, 1e3, t), s2 = srw_exit_before_hit({10, 0}, kOrigin, 1e5, t);
  CHECK(inside(s1));
  CHECK(inside(s2));
  CHECK(s2.width() < s1.width());
  // SRW from a neighbour of 0: a(x) = 1
  CHECK(srw_exit_before_hit({1, 0}, kOrigin, 1e4, t).value == doctest::Approx(1.0 / potential_radius(1e4)));
}

TEST_CASE("theory: escape probability vanishes at the boundary and increases outward") {
  const auto& t = table();
  // |x| = n + 1: 1 - a(n)/a(x) is small but positive
  const double near = escape_prob({11, 0}, 10.0, t).value;
  CHECK(std::fabs(near) < 0.05);
  double prev = near;
  for (std::int64_t r : {20, 100, 1000, 100000}) {
    const double v = escape_prob({r, 0}, 10.0, t).value;
    CHECK(v > prev);
    prev = v;
  }
  CHECK(prev < 1.0);
}

TEST_CASE("theory: local CLT shape") {
  const auto& t = table();
  const double l = std::log(1e4);
  CHECK(lclt_prediction(10000, {1, 0}, t) == doctest::Approx(1.0 / (1e4 * l * l)).epsilon(1e-12));
  const double a = potential({3, 4}, t);
  CHECK(lclt_prediction(10000, {3, 4}, t) == doctest::Approx(a * a / (1e4 * l * l)).epsilon(1e-12));
}

TEST_CASE("theory: internal boundary") {
  for (double r : {1.0, 2.5, 10.0, 37.3}) {
    const auto pts = internal_boundary({3, -2}, r);
    REQUIRE(!pts.empty());
    CHECK(std::is_sorted(pts.begin(), pts.end()));
    for (auto p : pts) {
      const auto d = p - LatticePoint{3, -2};
      CHECK(within_radius(norm2(d), r));
      bool out = false;
      for (auto q : neighbors(d)) out = out || !within_radius(norm2(q), r);
      CHECK(out);
    }
  }
  // B(1) = {0, +-e1, +-e2}; all but the centre are on the boundary
  CHECK(internal_boundary(kOrigin, 1.0).size() == 4);
}
