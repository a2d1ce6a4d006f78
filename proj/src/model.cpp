#include "condwalk/model.hpp"

namespace condwalk {

WalkModel::WalkModel(const ModelOptions& options)
    : WalkModel(std::make_shared<const PotentialTable>(PotentialTable::build(options.exact_radius)), options) {}

WalkModel::WalkModel(std::shared_ptr<const PotentialTable> table, const ModelOptions& options)
    : options_(options),
      table_(std::move(table)),
      rule_(std::make_shared<const StepRule>(table_, options.cache_radius)),
      boxes_(std::make_shared<const BoxExits>(options.max_box_half_width)) {}

}  // namespace condwalk
