#include <cmath>
#include <map>
#include <vector>

#include "condwalk/box_exit.hpp"
#include "condwalk/errors.hpp"
#include "condwalk/rng.hpp"
#include "doctest.h"

using namespace condwalk;

namespace {

// Exit law of SRW from the centre of {|w|_inf < k}, by pushing probability
// mass one step at a time until less than 1e-15 remains inside.
std::vector<double> pushed_exit_mass(std::int64_t k) {
  const std::int64_t n = 2 * k + 1;
  std::vector<double> in(static_cast<std::size_t>(n * n), 0.0), next(in.size());
  auto at = [&](std::int64_t x, std::int64_t y) -> std::size_t { return static_cast<std::size_t>((y + k) * n + (x + k)); };
  in[at(0, 0)] = 1.0;
  std::vector<double> east(static_cast<std::size_t>(2 * k - 1), 0.0);
  for (double inside = 1.0; inside > 1e-15;) {
    std::fill(next.begin(), next.end(), 0.0);
    inside = 0.0;
    for (std::int64_t y = -k + 1; y < k; ++y) {
      for (std::int64_t x = -k + 1; x < k; ++x) {
        const double m = in[at(x, y)] / 4;
        if (m == 0.0) continue;
        for (auto s : kSteps) {
          const std::int64_t u = x + s.x1, v = y + s.x2;
          if (u == k) {
            east[static_cast<std::size_t>(v + k - 1)] += m;
          } else if (u > -k && v > -k && v < k) {
            next[at(u, v)] += m;
            inside += m;
          }
        }
      }
    }
    std::swap(in, next);
  }
  return east;
}

}  // namespace

TEST_CASE("box exit: sine series matches direct mass propagation") {
  for (std::int64_t k : {1, 2, 3, 4, 6, 9}) {
    const BoxExitTable box(k);
    const auto ref = pushed_exit_mass(k);
    for (std::int64_t j = -k + 1; j < k; ++j) {
      CHECK(std::fabs(box.probability(j) - ref[static_cast<std::size_t>(j + k - 1)]) <= 1e-13);
    }
    CHECK(box.probability(k) == 0.0);
    CHECK(box.probability(-k) == 0.0);
  }
}

TEST_CASE("box exit: symmetric sides and normalisation for large boxes") {
  for (std::int64_t k : {48, 1024, 65536}) {
    const BoxExitTable box(k);
    double s = 0;
    for (std::int64_t j = -k + 1; j < k; ++j) s += box.probability(j);
    CHECK(s == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(box.probability(k / 3) == doctest::Approx(box.probability(-k / 3)).epsilon(1e-12));
  }
}

TEST_CASE("box exit: samples land on the boundary with the right law") {
  const BoxExitTable box(3);
  auto rng = RngStream::derive(1, 2, 3);
  std::map<std::int64_t, int> east;
  int sides[4] = {0, 0, 0, 0};
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const auto w = box.sample(rng.next_u64());
    REQUIRE(inf_norm(w) == 3);
    REQUIRE(std::abs(w.x1) + std::abs(w.x2) < 6);  // corners are unreachable
    if (w.x1 == 3) {
      ++sides[0];
      ++east[w.x2];
    } else if (w.x2 == 3) {
      ++sides[1];
    } else if (w.x1 == -3) {
      ++sides[2];
    } else {
      ++sides[3];
    }
  }
  for (int s : sides) CHECK(std::fabs(s / double(n) - 0.25) < 5 * std::sqrt(0.1875 / n));
  for (auto [j, c] : east) {
    const double p = box.probability(j);
    CHECK(std::fabs(c / double(n) - p) < 5 * std::sqrt(p * (1 - p) / n));
  }
}

TEST_CASE("box exit: size ladder and lookup") {
  const BoxExits boxes(100);
  std::vector<std::int64_t> ks;
  for (const auto& b : boxes.tables()) ks.push_back(b.half_width());
  CHECK(ks == std::vector<std::int64_t>{2, 3, 4, 6, 8, 12, 16, 24, 32, 48, 64, 96});
  CHECK(boxes.largest_fitting([](std::int64_t k) { return k <= 50; })->half_width() == 48);
  CHECK(boxes.largest_fitting([](std::int64_t k) { return k <= 1; }) == nullptr);
  CHECK(boxes.largest_fitting([](std::int64_t) { return true; })->half_width() == 96);
  CHECK_THROWS_AS(BoxExitTable(0), ConfigError);
}
