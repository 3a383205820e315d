#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "conperc/weights.hpp"

namespace conperc {

// Two connectivity calculi share the same algebraic skeleton: a series rule
// that multiplies weights along a chain and a parallel rule that merges
// edge-disjoint routes. Classical weights are probabilities p; quantum
// weights are concurrences c, whose parallel rule lives in the F-domain,
// F(c) = (1 + sqrt(1 - c^2)) / 2, a decreasing bijection [0,1] -> [1/2, 1].
enum class Calculus { Classical, Quantum };

const char* calculus_name(Calculus cal);

// F-domain helpers for the quantum parallel rule.
double f_of_c(double c);
// Inverse of f_of_c. Values below 1/2 are clamped to 1/2 (saturated parallel
// bundle, c = 1); see para() below.
double c_of_f(double f);

// Series composition: product of weights in both calculi.
// Empty list returns 1 (series identity).
double seri(Calculus cal, std::span<const double> weights);
double seri(Calculus cal, double a, double b);

// Parallel composition. Classical: 1 - prod(1 - p_i). Quantum: the F-domain
// product prod F(c_i) floored at 1/2, mapped back to c. The floor restores
// para(1, 1) = 1 (the printed two-link formula would not) and makes the
// n-ary rule independent of fold order. Empty list returns 0.
double para(Calculus cal, std::span<const double> weights);
double para(Calculus cal, double a, double b);

// Edge-disjoint A-B paths grouped as (length, multiplicity) pairs.
struct PathEnsemble {
  struct Entry {
    std::uint64_t length;        // > 0
    std::uint64_t multiplicity;  // > 0
  };
  std::vector<Entry> entries;  // sorted by length ascending

  void validate() const;  // throws std::domain_error on violation
  std::uint64_t total_paths() const;
};

// Crossing value of an ensemble of identical-weight links: parallel over all
// paths of the series of `length` links. Multiplicities are handled by
// exponentiation in the complement domain (classical) / F-domain (quantum),
// accumulated in log space so huge lengths and counts are safe.
double ensemble_crossing(Calculus cal, const PathEnsemble& ensemble,
                         const LinkWeight& w);
double ensemble_crossing(Calculus cal, const PathEnsemble& ensemble, double w);

}  // namespace conperc
