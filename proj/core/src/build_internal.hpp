#pragma once

#include <vector>

#include "coldchain/builder.hpp"

namespace coldchain::detail {

// Resolved robust inputs: deviations expanded to full arrays and gamma already
// clamped to the per-row budget interval [0, 1].
struct RobustSpec {
  double gamma = 0.0;
  std::vector<double> maxorder_dev;  // [i][v]
  std::vector<double> budget_dev;    // [i]
};

BuildResult build_model(const Instance& inst, const RobustSpec* robust);

}  // namespace coldchain::detail
