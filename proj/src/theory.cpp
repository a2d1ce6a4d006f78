#include "condwalk/theory.hpp"

#include <algorithm>
#include <cmath>

#include "condwalk/errors.hpp"

namespace condwalk {

namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

BracketedValue clamped(double v, double lo, double hi) {
  return {v, std::min(clamp01(lo), v), std::max(clamp01(hi), v)};
}

}  // namespace

double return_prob(LatticePoint x, const PotentialTable& table) {
  if (x == kOrigin) throw DomainError("return_prob: x must be nonzero");
  return 1.0 - 1.0 / (2.0 * potential(x, table));
}

double hit_prob(LatticePoint x, LatticePoint y, const PotentialTable& table) {
  if (x == kOrigin || y == kOrigin) throw DomainError("hit_prob: points must be nonzero");
  if (x == y) throw DomainError("hit_prob: x and y must differ");
  const double ax = potential(x, table);
  return (ax + potential(y, table) - potential(x - y, table)) / (2.0 * ax);
}

double green(LatticePoint x, LatticePoint y, const PotentialTable& table) {
  if (x == kOrigin || y == kOrigin) throw DomainError("green: points must be nonzero");
  const double ax = potential(x, table);
  const double ay = potential(y, table);
  return ay / ax * (ax + ay - potential(x - y, table));
}

BracketedValue escape_prob(LatticePoint x, double n, const PotentialTable& table, double K) {
  if (!(n > 0.0)) throw DomainError("escape_prob: n must be positive");
  if (static_cast<long double>(norm2(x)) < static_cast<long double>(n + 1.0) * (n + 1.0)) {
    throw DomainError("escape_prob: need |x| >= n + 1");
  }
  const double ax = potential(x, table);
  const double an = potential_radius(n);
  const double v = 1.0 - an / ax;
  const double d = K / (n * ax);
  return clamped(v, v - d, v + d);
}

BracketedValue annulus_escape_prob(LatticePoint x, double r, double L, const PotentialTable& table, double K) {
  if (!(r > 0.0) || !(L > r)) throw DomainError("annulus_escape_prob: need 0 < r < L");
  const long double x2 = static_cast<long double>(norm2(x));
  if (x2 < static_cast<long double>(r + 1.0) * (r + 1.0) || x2 > static_cast<long double>(L - 1.0) * (L - 1.0)) {
    throw DomainError("annulus_escape_prob: need r + 1 <= |x| <= L - 1");
  }
  const double ax = potential(x, table);
  const double ar = potential_radius(r);
  const double aL = potential_radius(L);
  const double f = aL / ax;
  const double v = (ax - ar) / (aL - ar) * f;
  // (ax - c) / (aL - c) decreases in c because ax < aL.
  const double e = K / r;
  const double lo = (ax - ar - e) / (aL - ar + e) * f * (1.0 - K / L);
  const double hi = (ax - ar + e) / (aL - ar - e) * f * (1.0 + K / L);
  return clamped(v, lo, aL - ar - e > 0.0 ? hi : 1.0);
}

BracketedValue srw_exit_before_hit(LatticePoint x, LatticePoint y, double L, const PotentialTable& table, double K) {
  if (x == kOrigin) throw DomainError("srw_exit_before_hit: x must be nonzero");
  if (!(L > 0.0)) throw DomainError("srw_exit_before_hit: L must be positive");
  if (!within_radius(norm2(x - y), L)) throw DomainError("srw_exit_before_hit: x must lie in B(y, L)");
  if (!within_radius(norm2(y), L - 2.0) || L < 2.0) throw DomainError("srw_exit_before_hit: need |y| <= L - 2");
  const double aL = potential_radius(L);
  const double v = potential(x, table) / aL;
  const double d = K * std::max(norm(y), 1.0) / (L * aL);
  return clamped(v, v - d, v + d);
}

double lclt_prediction(std::uint64_t n, LatticePoint y, const PotentialTable& table) {
  if (y == kOrigin) throw DomainError("lclt_prediction: y must be nonzero");
  if (n < 2) throw DomainError("lclt_prediction: n must be at least 2");
  const double ay = potential(y, table);
  const double nd = static_cast<double>(n);
  const double ln = std::log(nd);
  return ay * ay / (nd * ln * ln);
}

std::vector<LatticePoint> internal_boundary(LatticePoint c, double r) {
  if (!(r > 0.0)) throw DomainError("internal_boundary: r must be positive");
  const std::int64_t t = closed_disk_threshold(r);
  auto col_max = [t](std::int64_t x) -> std::int64_t {  // largest y with x^2 + y^2 <= t, or -1
    if (x * x > t) return -1;
    auto y = static_cast<std::int64_t>(std::sqrt(static_cast<double>(t - x * x)));
    while (y * y > t - x * x) --y;
    while ((y + 1) * (y + 1) <= t - x * x) ++y;
    return y;
  };
  std::vector<LatticePoint> out;
  for (std::int64_t x = 0; x * x <= t; ++x) {
    const std::int64_t top = col_max(x);
    // (x, y) is on the boundary iff (x+1, y) or (x, y+1) is outside.
    const std::int64_t from = std::min(top, col_max(x + 1) + 1);
    for (std::int64_t y = std::max<std::int64_t>(from, 0); y <= top; ++y) {
      for (int sx : {1, -1}) {
        if (x == 0 && sx < 0) continue;
        for (int sy : {1, -1}) {
          if (y == 0 && sy < 0) continue;
          out.push_back(c + LatticePoint{sx * x, sy * y});
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace condwalk
