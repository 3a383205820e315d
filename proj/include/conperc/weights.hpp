#pragma once

namespace conperc {

// A link carries a partially entangled pure two-qubit state parameterized by
// theta in [0, pi/4]. Two equivalent coordinates are used throughout:
//   p = 2 sin^2(theta)   conversion probability of the classical mapping,
//   c = sin(2 theta)     concurrence of the state.
// All three run from 0 (dead link) to 1 (maximally entangled link) and are
// monotone in each other. theta is the canonical storage coordinate.

double theta_to_p(double theta);
double theta_to_c(double theta);
double p_to_theta(double p);
double c_to_theta(double c);

class LinkWeight {
 public:
  static LinkWeight from_theta(double theta);
  static LinkWeight from_p(double p);
  static LinkWeight from_c(double c);

  double theta() const { return theta_; }
  double p() const;
  double c() const;

 private:
  explicit LinkWeight(double theta) : theta_(theta) {}
  double theta_;
};

}  // namespace conperc
