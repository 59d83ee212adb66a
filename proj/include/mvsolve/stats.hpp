#pragma once

#include <cstddef>
#include <vector>

namespace mvsolve {

// Boxplot-style five-number summary with 1.5*IQR whiskers. Quartiles use
// linear interpolation between order statistics; whiskers are clamped to the
// most extreme data points inside the fences and outliers lie beyond them.
struct StatSummary {
  std::size_t count = 0;
  double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0;
  double whisker_lo = 0.0, whisker_hi = 0.0;
  std::vector<double> outliers;
};

StatSummary summarize(std::vector<double> values);

}  // namespace mvsolve
