#pragma once

#include <string>
#include <vector>

#include "kgr/kg/types.hpp"

namespace kgr::bench {

// Gold answers arrive as raw dataset strings (ids or labels). A prediction
// matches a gold string on exact node key (entity id / literal payload) or
// case-insensitive display form.
bool answer_matches(const kg::NodeValue& predicted, const std::string& gold);

// 1 iff the rank-1 prediction set intersects gold. Gold must be non-empty.
int hit_at_1(const std::vector<kg::NodeValue>& predicted,
             const std::vector<std::string>& gold);

// Set-level harmonic mean of precision and recall; 0 for an empty
// prediction. Gold must be non-empty.
double f1(const std::vector<kg::NodeValue>& predicted,
          const std::vector<std::string>& gold);

}  // namespace kgr::bench
