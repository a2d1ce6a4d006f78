#include "condwalk/step_rule.hpp"

#include <algorithm>
#include <cmath>

#include "condwalk/errors.hpp"

namespace condwalk {

namespace {

std::uint32_t quantise(long double c) {
  const long double scaled = std::nearbyint(c * static_cast<long double>(kStepScale));
  if (scaled <= 0.0L) return 0;
  if (scaled >= static_cast<long double>(kStepScale)) return kStepScale;
  return static_cast<std::uint32_t>(scaled);
}

}  // namespace

StepRule::StepRule(std::shared_ptr<const PotentialTable> table, std::int64_t cache_radius)
    : table_(std::move(table)), radius_(cache_radius) {
  if (!table_) throw ConfigError("StepRule needs a potential table");
  if (radius_ < 1) throw ConfigError("cache radius must be positive");
  const std::int64_t w = cache_stride();
  cache_.resize(static_cast<std::size_t>(w * w));

  // Rolling rows of a(.) on [-W-1, W+1].
  const std::int64_t span = w + 2;
  std::vector<double> below(static_cast<std::size_t>(span)), row(static_cast<std::size_t>(span)),
      above(static_cast<std::size_t>(span));
  auto fill = [&](std::vector<double>& v, std::int64_t x2) {
    for (std::int64_t i = 0; i < span; ++i) v[static_cast<std::size_t>(i)] = potential({i - radius_ - 1, x2}, *table_);
  };
  fill(below, -radius_ - 1);
  fill(row, -radius_);
  for (std::int64_t x2 = -radius_; x2 <= radius_; ++x2) {
    fill(above, x2 + 1);
    for (std::int64_t x1 = -radius_; x1 <= radius_; ++x1) {
      const auto i = static_cast<std::size_t>(x1 + radius_ + 1);
      auto& slot = cache_[static_cast<std::size_t>(cache_index({x1, x2}))];
      if (x1 == 0 && x2 == 0) {
        slot = StepThresholds{};
        continue;
      }
      slot = conditioned_thresholds({row[i + 1], above[i], row[i - 1], below[i]});
    }
    below.swap(row);
    row.swap(above);
  }

  std::int64_t worst = 0;
  for (std::int64_t r : {radius_, radius_ + 1}) {
    for (std::int64_t i = -r; i <= r; ++i) {
      for (const LatticePoint p : {LatticePoint{i, r}, LatticePoint{i, -r}, LatticePoint{r, i}, LatticePoint{-r, i}}) {
        const StepThresholds t = in_cache(p) ? cache_[static_cast<std::size_t>(cache_index(p))] : compute(p);
        for (std::int64_t k = 0; k < 3; ++k) {
          const std::int64_t d = static_cast<std::int64_t>(t.cut[static_cast<std::size_t>(k)]) - (k + 1) * (kStepScale / 4);
          worst = std::max(worst, d < 0 ? -d : d);
        }
      }
    }
  }
  far_shortcut_ = worst < static_cast<std::int64_t>(kBand / 4);
}

StepThresholds StepRule::conditioned_thresholds(const std::array<double, 4>& w) {
  // Normalising by the neighbour sum (= 4 a(x) up to harmonicity error)
  // keeps a zero-weight neighbour (the origin) at exactly zero width.
  const long double total = static_cast<long double>(w[0]) + w[1] + w[2] + w[3];
  const long double c0 = w[0] / total;
  const long double c1 = (static_cast<long double>(w[0]) + w[1]) / total;
  const long double c2 = (static_cast<long double>(w[0]) + w[1] + w[2]) / total;
  StepThresholds t{{quantise(c0), quantise(c1), quantise(c2)}};
  if (w[3] == 0.0) t.cut[2] = kStepScale;
  if (w[2] == 0.0) t.cut[2] = t.cut[1];
  if (w[1] == 0.0) t.cut[1] = t.cut[0];
  if (w[0] == 0.0) t.cut[0] = 0;
  return t;
}

StepThresholds StepRule::compute(LatticePoint x) const {
  const auto nb = neighbors(x);
  return conditioned_thresholds(
      {potential(nb[0], *table_), potential(nb[1], *table_), potential(nb[2], *table_), potential(nb[3], *table_)});
}

StepThresholds StepRule::thresholds(WalkKind kind, LatticePoint x) const {
  if (kind == WalkKind::Srw) return srw_thresholds();
  if (x == kOrigin) throw DomainError("conditioned walk is undefined at the origin");
  if (in_cache(x)) return cache_[static_cast<std::size_t>(cache_index(x))];
  return compute(x);
}

}  // namespace condwalk
