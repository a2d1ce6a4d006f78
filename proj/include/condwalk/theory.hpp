#pragma once

#include <vector>

#include "condwalk/lattice.hpp"
#include "condwalk/potential.hpp"

namespace condwalk {

/// A closed form whose O(.) remainder has no explicit constant: the value
/// with the remainder dropped, and the range it spans when the remainder is
/// taken as +-K times its stated order.
struct BracketedValue {
  double value = 0.0;
  double sys_lo = 0.0;
  double sys_hi = 0.0;

  static BracketedValue exact(double v) { return {v, v, v}; }
  double width() const { return sys_hi - sys_lo; }
};

inline constexpr double kDefaultRemainder = 1.0;

/// P_x[conditioned walk ever returns to x] = 1 - 1/(2a(x)). x != 0.
double return_prob(LatticePoint x, const PotentialTable& table);

/// P_x[conditioned walk ever hits y] = (a(x) + a(y) - a(x-y)) / (2a(x)).
/// x != y, both nonzero.
double hit_prob(LatticePoint x, LatticePoint y, const PotentialTable& table);

/// Expected visits to y from x: (a(y)/a(x)) (a(x) + a(y) - a(x-y)). G(x,x) = 2a(x).
double green(LatticePoint x, LatticePoint y, const PotentialTable& table);

/// P_x[tau(n) = infinity] = 1 - (a(n) + O(1/n)) / a(x), |x| >= n + 1.
/// a(n) is the radial function potential_radius(n).
BracketedValue escape_prob(LatticePoint x, double n, const PotentialTable& table, double K = kDefaultRemainder);

/// P_x[tau(r) > tau(L)], r + 1 <= |x| <= L - 1:
/// (1 + O(1/L)) (a(x) - a(r) + O(1/r)) / (a(L) - a(r) + O(1/r)) * a(L)/a(x).
BracketedValue annulus_escape_prob(LatticePoint x, double r, double L, const PotentialTable& table,
                                   double K = kDefaultRemainder);

/// SRW: P_x[tau_+(0) > tau_+(dB(y, L))] = a(x) / (a(L) + O((|y| v 1)/L)),
/// bracketed by +-K (|y| v 1) / (L a(L)). x in B(y, L), |y| <= L - 2, x != 0.
BracketedValue srw_exit_before_hit(LatticePoint x, LatticePoint y, double L, const PotentialTable& table,
                                   double K = kDefaultRemainder);

/// Shape of P[S_n = y]: a(y)^2 / (n ln^2 n). y != 0, n >= 2.
double lclt_prediction(std::uint64_t n, LatticePoint y, const PotentialTable& table);

/// Internal boundary of B(c, r): points of the disk with a neighbor outside.
std::vector<LatticePoint> internal_boundary(LatticePoint c, double r);

}  // namespace condwalk
