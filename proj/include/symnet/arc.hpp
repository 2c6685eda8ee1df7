#pragma once

#include <string>
#include <vector>

#include "symnet/group.hpp"

namespace symnet {

struct ArcPrediction {
  SymmetryGroup group;
  Pattern test;
  std::vector<Pattern> orbit;        // distinct images s.test, first appearance in group order
  std::vector<Pattern> predictions;  // orbit members other than the test itself
  bool identity_only = false;
};

/// Applies the symmetry group of the training set to a test item.
inline ArcPrediction arc_predict(const PatternSet& train, const Pattern& test) {
  detail::require_dim(test.size() == train.dimension(), "test item has length " + std::to_string(test.size()) +
                                                            ", training items have length " +
                                                            std::to_string(train.dimension()));
  ArcPrediction out{symmetry_group(train), test, {}, {}, false};
  out.identity_only = out.group.order() == 1;
  for (const auto& s : out.group) {
    auto img = act(s, test);
    const bool seen =
        std::any_of(out.orbit.begin(), out.orbit.end(), [&](const Pattern& p) { return same_pattern(p, img); });
    if (seen) continue;
    if (!same_pattern(img, test)) out.predictions.push_back(img);
    out.orbit.push_back(std::move(img));
  }
  if (out.predictions.empty()) out.predictions.push_back(test);
  return out;
}

} // namespace symnet
