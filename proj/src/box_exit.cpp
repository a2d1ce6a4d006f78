#include "condwalk/box_exit.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "condwalk/errors.hpp"
#include "condwalk/potential.hpp"

namespace condwalk {

BoxExitTable::BoxExitTable(std::int64_t half_width) : k_(half_width) {
  if (k_ < 1) throw ConfigError("box half-width must be positive");
  const std::int64_t n = 2 * k_;
  const double kd = static_cast<double>(k_);
  const double nd = static_cast<double>(n);

  // Odd modes only; stop once 1/cosh(k b_m) is negligible.
  std::vector<double> weight;
  for (std::int64_t m = 1; m < n; m += 2) {
    const double b = 2.0 * std::asinh(std::sin(kPi * static_cast<double>(m) / (2.0 * nd)));
    const double kb = kd * b;
    if (kb > 45.0) break;
    const double sign = ((m - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
    weight.push_back(sign / std::cosh(kb));
  }

  mass_.resize(static_cast<std::size_t>(n - 1));
  double side = 0.0;
  for (std::int64_t v = 1; v < n; ++v) {
    double h = 0.0;
    for (std::size_t i = 0; i < weight.size(); ++i) {
      const double m = static_cast<double>(2 * i + 1);
      h += weight[i] * std::sin(kPi * m * static_cast<double>(v) / nd);
    }
    h = std::max(0.0, h / nd);
    mass_[static_cast<std::size_t>(v - 1)] = h;
    side += h;
  }
  if (!(std::fabs(4.0 * side - 1.0) < 1e-12)) {
    throw NumericalFailure("box harmonic measure does not normalise for half-width " + std::to_string(k_));
  }
  cdf_.resize(mass_.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < mass_.size(); ++i) {
    acc += mass_[i];
    cdf_[i] = acc / side;
  }
  cdf_.back() = 1.0;
}

double BoxExitTable::probability(std::int64_t offset) const {
  if (offset <= -k_ || offset >= k_) return 0.0;
  return mass_[static_cast<std::size_t>(offset + k_ - 1)];
}

LatticePoint BoxExitTable::sample(std::uint64_t bits) const {
  const double u = static_cast<double>(bits >> 11) * 0x1.0p-53;
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  const std::int64_t j = static_cast<std::int64_t>(it - cdf_.begin()) - (k_ - 1);
  switch (bits & 3U) {
    case 0:
      return {k_, j};
    case 1:
      return {-j, k_};
    case 2:
      return {-k_, -j};
    default:
      return {j, -k_};
  }
}

BoxExits::BoxExits(std::int64_t max_half_width) {
  for (std::int64_t p = 2; p <= max_half_width; p *= 2) {
    tables_.emplace_back(p);
    if (p + p / 2 <= max_half_width && p >= 2) tables_.emplace_back(p + p / 2);
  }
}

}  // namespace condwalk
