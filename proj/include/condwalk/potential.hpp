#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "condwalk/lattice.hpp"

namespace condwalk {

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
/// (2 gamma + 3 ln 2) / pi, the additive constant of the potential kernel.
inline constexpr double kPotentialConstant = (2.0 * kEulerGamma + 3.0 * 0.69314718055994530941723212145817657) / kPi;

inline constexpr std::int64_t kDefaultExactRadius = 512;
inline constexpr std::int64_t kMaxExactRadius = 4096;

/// Exact values of the SRW potential kernel a(.) on the disk |p| <= R, stored
/// for one octant (0 <= x2 <= x1) in long double. Immutable once built.
class PotentialTable {
 public:
  /// Builds the table by the harmonic octant recurrence seeded by the
  /// diagonal closed form a(n,n) = (4/pi) sum_{k<=n} 1/(2k-1).
  ///
  /// The recurrence is run in MPFR; precision_bits = 0 picks a precision that
  /// outgrows the recurrence's error amplification (~5.8x per column).
  /// Throws ConfigError for a radius outside [1, 4096] and NumericalFailure
  /// (naming the offending point) if a value goes non-positive or a
  /// harmonicity residual exceeds 1e-8.
  static PotentialTable build(std::int64_t exact_radius = kDefaultExactRadius, unsigned precision_bits = 0);

  std::int64_t exact_radius() const { return radius_; }

  /// |p| <= exact_radius.
  bool covers(LatticePoint p) const;

  /// Table value; p must be covered.
  long double exact_value(LatticePoint p) const;

  /// max |exact - asymptotic| over the ring R-1 <= |p| <= R.
  double crossover_error() const { return crossover_error_; }

  /// max over covered p != 0 of a(p) - a_r(|p|) (clamped at 0). Used as a
  /// safety margin when bounding a(.) from above by the radial formula.
  double max_excess_over_radial() const { return max_excess_; }

  /// Largest harmonicity residual found during construction.
  double max_residual() const { return max_residual_; }

  unsigned precision_bits() const { return precision_bits_; }
  std::size_t memory_bytes() const { return values_.size() * sizeof(long double); }

 private:
  PotentialTable() = default;
  // Octant of the disk only: column x holds 0 <= y <= min(x, sqrt(R^2 - x^2)).
  std::size_t index(std::int64_t x, std::int64_t y) const {
    return offsets_[static_cast<std::size_t>(x)] + static_cast<std::size_t>(y);
  }

  std::int64_t radius_{0};
  std::int64_t radius_sq_{0};
  std::vector<std::size_t> offsets_;
  std::vector<long double> values_;
  double crossover_error_{0.0};
  double max_excess_{0.0};
  double max_residual_{0.0};
  unsigned precision_bits_{0};
};

/// a(p): table value inside the exact disk, asymptotic formula outside.
double potential(LatticePoint p, const PotentialTable& table);

/// a(r) = (2/pi) ln r + (2 gamma + 3 ln 2)/pi for real r > 0.
double potential_radius(double r);

/// Asymptotic formula evaluated at a lattice point (p != 0).
double potential_asymptotic(LatticePoint p);

/// Independent quadrature value of a(p) for |p| <= 64, absolute error <= 1e-9.
/// Throws NumericalFailure when the quadrature does not converge.
double potential_oracle(LatticePoint p);

}  // namespace condwalk
