#pragma once

#include <memory>

#include "condwalk/model.hpp"

namespace testsupport {

// One default-radius model per test binary; building it takes a few seconds.
inline const condwalk::WalkModel& model() {
  static const condwalk::WalkModel m([] {
    condwalk::ModelOptions o;
    o.cache_radius = 256;
    return o;
  }());
  return m;
}

inline const condwalk::PotentialTable& table() { return model().table(); }

}  // namespace testsupport
