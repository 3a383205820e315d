#include "conperc/weights.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace conperc {

namespace {

constexpr double kQuarterPi = std::numbers::pi / 4.0;

void check_theta(double theta) {
  if (!(theta >= 0.0 && theta <= kQuarterPi + 1e-15)) {
    throw std::domain_error("theta out of [0, pi/4]: " + std::to_string(theta));
  }
}

void check_unit(double x, const char* name) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::domain_error(std::string(name) + " out of [0, 1]: " +
                            std::to_string(x));
  }
}

}  // namespace

double theta_to_p(double theta) {
  check_theta(theta);
  const double s = std::sin(theta);
  return 2.0 * s * s;
}

double theta_to_c(double theta) {
  check_theta(theta);
  return std::sin(2.0 * theta);
}

double p_to_theta(double p) {
  check_unit(p, "p");
  return std::asin(std::sqrt(0.5 * p));
}

double c_to_theta(double c) {
  check_unit(c, "c");
  return 0.5 * std::asin(c);
}

LinkWeight LinkWeight::from_theta(double theta) {
  check_theta(theta);
  return LinkWeight(theta);
}

LinkWeight LinkWeight::from_p(double p) { return LinkWeight(p_to_theta(p)); }

LinkWeight LinkWeight::from_c(double c) { return LinkWeight(c_to_theta(c)); }

double LinkWeight::p() const { return theta_to_p(theta_); }

double LinkWeight::c() const { return theta_to_c(theta_); }

}  // namespace conperc
