#pragma once

#include <cstdint>
#include <vector>

#include "condwalk/lattice.hpp"

namespace condwalk {

/// Exit distribution of simple random walk started at the centre of the
/// square {|w - z|_inf < k}: the discrete harmonic measure on the four
/// sides {|w - z|_inf = k} (corners are unreachable). Computed from the
/// discrete sine series of the Dirichlet problem,
///   H(j) = (1/2k) sum_{m odd} (-1)^((m-1)/2) sin(m pi (j+k) / 2k) / cosh(k b_m),
///   sinh(b_m / 2) = sin(m pi / 4k),
/// for the exit point (k, j) on the east side; the other sides follow by
/// symmetry and each carries mass exactly 1/4.
class BoxExitTable {
 public:
  explicit BoxExitTable(std::int64_t half_width);

  std::int64_t half_width() const { return k_; }

  /// Harmonic measure of the east-side point (k, offset), |offset| < k.
  double probability(std::int64_t offset) const;

  /// Exit displacement from one 64-bit draw: bits 0-1 pick the side, the
  /// top 53 bits invert the per-side CDF.
  LatticePoint sample(std::uint64_t bits) const;

 private:
  std::int64_t k_;
  std::vector<double> mass_;  // index offset + k - 1
  std::vector<double> cdf_;   // normalised per side
};

/// Box tables for half-widths 2, 3, 4, 6, 8, 12, ... up to a maximum.
class BoxExits {
 public:
  explicit BoxExits(std::int64_t max_half_width);

  const std::vector<BoxExitTable>& tables() const { return tables_; }

  /// Largest table whose half-width satisfies `fits`, assumed monotone
  /// (true for all widths below some bound). nullptr if none fits.
  template <class Fits>
  const BoxExitTable* largest_fitting(Fits&& fits) const {
    std::size_t lo = 0, hi = tables_.size();
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (fits(tables_[mid].half_width())) {
        lo = mid + 1;
      } else {
        hi = mid;
      }
    }
    return lo == 0 ? nullptr : &tables_[lo - 1];
  }

 private:
  std::vector<BoxExitTable> tables_;
};

}  // namespace condwalk
