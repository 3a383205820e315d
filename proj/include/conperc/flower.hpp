#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "conperc/calculus.hpp"
#include "conperc/fit.hpp"

namespace conperc {

// (U,V) flower: each generation replaces every link by two parallel arms of
// U and V links, U <= V. Shortest A-B path length L = U^n; node count grows
// like (U+V)^n; dimension d = ln(U+V)/ln(U) for U >= 2.
struct FlowerSpec {
  int u;
  int v;
  int n;
  void validate() const;  // U >= 1, V >= U, n >= 0
};

double dimension(int u, int v);  // requires U >= 2

// One renormalization step: para(seri(w x U), seri(w x V)).
double rg_map(Calculus cal, int u, int v, double w);

// n-fold nesting of rg_map; n = 0 returns w.
double sponge_crossing(Calculus cal, int u, int v, int n, double w);

// Unique fixed point of rg_map in (0, 1), by bisection. Requires U >= 2.
double threshold_exact(Calculus cal, int u, int v);

// Same fixed point solved in the gap variable s = (1 - w) * V, which stays
// well-conditioned when the threshold crowds against 1 (V may be any real
// value >= U here). Returns s; the threshold is 1 - s / V.
double threshold_gap(Calculus cal, int u, double v_real);

// One RG step in the gap variable: s' = V (1 - R(1 - s/V)). The classical
// complement factorizes exactly, 1 - R = (1 - p^U)(1 - p^V); the quantum
// step evaluates the F-domain product without forming 1 - c. Keeps
// near-threshold sweeps meaningful for V far beyond where w itself is
// representable away from 1.
double rg_map_gap(Calculus cal, int u, double v_real, double s);

// w such that sponge_crossing(cal, u, v, n, w) = target, by bisection.
double finite_size_threshold(Calculus cal, int u, int v, int n, double target);

// Thermal exponent from the fixed-point derivative: nu = ln U / ln R'(w_th).
// Classical uses the closed-form derivative; quantum a Richardson-extrapolated
// central difference.
double nu_exact(Calculus cal, int u, int v);

// Slope fit of ln|w_th(L) - w_th| against ln L over generations
// [n_min, n_max]; the exponent reported is nu = -1/slope. Only the largest
// `window` generations enter the fit; points with |w_th(L) - w_th| < 1e-15
// are dropped (fit.truncated set).
ScalingFit nu_fit(Calculus cal, int u, int v, int n_min, int n_max,
                  double target, int window = 6);

// The 2^n edge-disjoint A-B paths of a generation-n flower: lengths
// U^{n-k} V^k with binomial(n, k) multiplicity. Throws on 64-bit overflow.
PathEnsemble decompose_paths(int u, int v, int n);

}  // namespace conperc
