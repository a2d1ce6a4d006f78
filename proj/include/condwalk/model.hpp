#pragma once

#include <cstdint>
#include <memory>

#include "condwalk/box_exit.hpp"
#include "condwalk/potential.hpp"
#include "condwalk/step_rule.hpp"

namespace condwalk {

struct ModelOptions {
  std::int64_t exact_radius = kDefaultExactRadius;
  std::int64_t cache_radius = kDefaultExactRadius;
  std::int64_t max_box_half_width = 1 << 16;
};

/// Everything a sampler needs: the potential table, the step rule with its
/// threshold cache, and the box exit tables. Immutable and cheap to copy;
/// safe to share between threads.
class WalkModel {
 public:
  explicit WalkModel(const ModelOptions& options = {});
  WalkModel(std::shared_ptr<const PotentialTable> table, const ModelOptions& options);

  const PotentialTable& table() const { return *table_; }
  const std::shared_ptr<const PotentialTable>& table_ptr() const { return table_; }
  const StepRule& rule() const { return *rule_; }
  const BoxExits& boxes() const { return *boxes_; }
  const ModelOptions& options() const { return options_; }

  double a(LatticePoint p) const { return potential(p, *table_); }

 private:
  ModelOptions options_;
  std::shared_ptr<const PotentialTable> table_;
  std::shared_ptr<const StepRule> rule_;
  std::shared_ptr<const BoxExits> boxes_;
};

}  // namespace condwalk
