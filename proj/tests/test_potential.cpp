#include <cmath>

#include "condwalk/errors.hpp"
#include "condwalk/potential.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace condwalk;
using testsupport::table;

TEST_CASE("potential: values at the origin and its neighbors are exact") {
  const auto t = PotentialTable::build(1);
  CHECK(t.exact_value({0, 0}) == 0.0L);
  for (auto p : kSteps) CHECK(t.exact_value(p) == 1.0L);
  CHECK(potential({0, -1}, table()) == 1.0);
  CHECK(potential({0, 0}, table()) == 0.0);
}

TEST_CASE("potential: small closed forms") {
  const auto t = PotentialTable::build(2);
  CHECK(static_cast<double>(t.exact_value({1, 1})) == doctest::Approx(4.0 / kPi).epsilon(1e-15));
  CHECK(static_cast<double>(t.exact_value({2, 0})) == doctest::Approx(4.0 - 8.0 / kPi).epsilon(1e-15));
  CHECK(static_cast<double>(t.exact_value({0, 2})) == doctest::Approx(1.4535209105).epsilon(1e-10));
}

TEST_CASE("potential: diagonal closed form") {
  long double s = 0;
  for (int n = 1; n <= 300; ++n) {
    s += 1.0L / (2 * n - 1);
    if (n % 37 == 0) CHECK(std::fabs(static_cast<double>(table().exact_value({n, n}) - 4.0L / 3.14159265358979323846264338327950288L * s)) < 1e-15);
  }
}

TEST_CASE("potential: dihedral symmetry") {
  for (std::int64_t x = -30; x <= 30; x += 7) {
    for (std::int64_t y = -30; y <= 30; y += 3) {
      const double v = potential({x, y}, table());
      CHECK(potential({-x, y}, table()) == v);
      CHECK(potential({x, -y}, table()) == v);
      CHECK(potential({y, x}, table()) == v);
    }
  }
}

TEST_CASE("potential: harmonicity and source at the origin") {
  const auto& t = table();
  CHECK(t.max_residual() <= 1e-8);
  long double src = 0;
  for (auto p : kSteps) src += t.exact_value(p);
  CHECK(src / 4 - t.exact_value(kOrigin) == 1.0L);
  // Spot check in long double, independent of the build's own check.
  for (std::int64_t x = 1; x < 360; x += 13) {
    for (std::int64_t y = 0; y <= x && x * x + y * y < 510 * 510; y += 11) {
      const LatticePoint p{x, y};
      long double s = 0;
      for (auto q : neighbors(p)) s += t.exact_value(q);
      CHECK(std::fabs(static_cast<double>(s / 4 - t.exact_value(p))) <= 1e-8);
    }
  }
}

TEST_CASE("potential: positive off the origin, increasing along the axis") {
  const auto& t = table();
  for (std::int64_t n = 0; n < t.exact_radius(); ++n) {
    CHECK(t.exact_value({n + 1, 0}) > t.exact_value({n, 0}));
  }
}

TEST_CASE("potential: oracle reproduces closed forms") {
  CHECK(std::fabs(potential_oracle({0, 0})) <= 1e-9);
  CHECK(std::fabs(potential_oracle({1, 0}) - 1.0) <= 1e-9);
  CHECK(std::fabs(potential_oracle({0, 1}) - 1.0) <= 1e-9);
  CHECK(std::fabs(potential_oracle({1, 1}) - 4.0 / kPi) <= 1e-9);
  CHECK(std::fabs(potential_oracle({2, 0}) - (4.0 - 8.0 / kPi)) <= 1e-9);
  CHECK_THROWS_AS(potential_oracle({65, 0}), DomainError);
}

TEST_CASE("potential: table agrees with the oracle on a sample of B(20)") {
  double worst = 0;
  for (std::int64_t x = -20; x <= 20; x += 3) {
    for (std::int64_t y = -20; y <= 20; y += 4) {
      if (x * x + y * y > 400) continue;
      worst = std::max(worst, std::fabs(potential({x, y}, table()) - potential_oracle({x, y})));
    }
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("potential: asymptotic formula and crossover") {
  CHECK(potential_radius(1.0) == doctest::Approx(1.02937370565).epsilon(1e-11));
  CHECK(potential_radius(std::exp(1.0)) == doctest::Approx(1.66599347802).epsilon(1e-11));
  CHECK(potential({1000000, 0}, table()) == doctest::Approx(2.0 / kPi * std::log(1e6) + kPotentialConstant));
  CHECK(potential({1000000, 0}, table()) == doctest::Approx(9.8246009).epsilon(1e-7));
  for (double r : {2.0, 17.5, 1e4}) {
    CHECK(potential_radius(r * r) == doctest::Approx(2 * potential_radius(r) - kPotentialConstant).epsilon(1e-14));
  }
  CHECK_THROWS_AS(potential_radius(0.0), DomainError);
  CHECK_THROWS_AS(potential_radius(-1.0), DomainError);
  const double R = static_cast<double>(table().exact_radius());
  CHECK(table().crossover_error() <= 10.0 * 2.0 / (R * R));
  CHECK(table().memory_bytes() < 2u << 20);
}

TEST_CASE("potential: radius validation") {
  CHECK_THROWS_AS(PotentialTable::build(0), ConfigError);
  CHECK_THROWS_AS(PotentialTable::build(4097), ConfigError);
}

TEST_CASE("potential: low precision recurrence is caught") {
  // 64-bit significand is what 80-bit long double offers; the residual
  // check must reject it well before radius 60.
  CHECK_THROWS_AS(PotentialTable::build(60, 64), NumericalFailure);
}
