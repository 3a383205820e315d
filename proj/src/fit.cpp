#include "conperc/fit.hpp"

#include <cmath>
#include <stdexcept>

namespace conperc {

ScalingFit fit_slope(const std::vector<std::pair<double, double>>& points) {
  const std::size_t n = points.size();
  if (n < 3) throw std::invalid_argument("fit_slope: need at least 3 points");
  double sx = 0.0, sy = 0.0;
  for (const auto& [x, y] : points) {
    sx += x;
    sy += y;
  }
  const double mx = sx / double(n), my = sy / double(n);
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_slope: degenerate x range");
  ScalingFit fit;
  fit.exponent = sxy / sxx;
  const double intercept = my - fit.exponent * mx;
  double ssr = 0.0;
  for (const auto& [x, y] : points) {
    const double r = y - (intercept + fit.exponent * x);
    ssr += r * r;
  }
  fit.stderr_ = std::sqrt(ssr / double(n - 2) / sxx);
  fit.points = points;
  return fit;
}

}  // namespace conperc
