#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace conperc {

// Unweighted least-squares slope of y against x plus the usual slope
// standard error. Scaling exponents throughout the project are slopes of
// log-log data, so the container keeps the fitted points for reporting.
struct ScalingFit {
  double exponent = 0.0;
  double stderr_ = 0.0;
  std::vector<std::pair<double, double>> points;  // (x, y) actually fitted
  bool truncated = false;  // window was shortened (underflowing data dropped)
};

ScalingFit fit_slope(const std::vector<std::pair<double, double>>& points);

}  // namespace conperc
