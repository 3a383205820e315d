#pragma once

#include <vector>

#include "conperc/calculus.hpp"
#include "conperc/fit.hpp"

namespace conperc {

// Layer-transfer computation of the non-cluster percolating strengths
// P_inf / C_inf: the probability (concurrence) that a deepest-layer node
// reaches the flower boundary. A state carries the node's connectivity x, y
// to the terminals of its current enclosing subflower and the accumulated
// bulk-to-boundary amplitude as ln t (log space survives n ~ 150 layers and
// node counts (U+V)^37).
struct TransferState {
  double x = 1.0;
  double y = 1.0;
  double ln_t = 0.0;
};

// How the two route weights A, B of a transfer step are composed.
// ClosedForm evaluates the series-parallel route expressions directly;
// ReductionGraph builds the explicit five-node motif graph and runs
// reduce_two_terminal on it. The motif is series-parallel, so the two agree
// to solver precision; the graph variant exists to cross-check the closed
// form against the general reduction machinery.
enum class TransferVariant { ClosedForm, ReductionGraph };

// One branch step: the node's subflower sits at position `branch`
// (0..U-1 on the short arm, U..U+V-1 at offset b on the long arm) inside a
// motif whose links carry weight w. Solves the three-equation system
//   x' t' = t A,  y' t' = t B,  x' y' = R(w)
// in closed form: x' = sqrt(R A / B), y' = R / x', t' = t A / x'.
TransferState transfer_step(Calculus cal, int u, int v, int branch, double w,
                            const TransferState& state,
                            TransferVariant variant = TransferVariant::ClosedForm);

// ln of the percolating strength after n layers at link weight w. Each layer
// averages t'/t arithmetically over the U+V branch positions and propagates
// the branch-averaged (x', y'); the motif weight is renormalized by rg_map
// between layers. Seeded with x = y = w (seed_unit = false) or x = y = 1;
// the seed only shifts ln strength by an n-independent constant.
double strength_iterate(Calculus cal, int u, int v, int n, double w,
                        TransferVariant variant = TransferVariant::ClosedForm,
                        bool seed_unit = false);

// Limiting layer ratio t'/t at the threshold, iterated from x = y =
// sqrt(w_th) until the branch-averaged state self-consists. Equals
// (U+V)^{-theta}; the fractal dimension follows as d_f = d (1 - theta).
double critical_ratio(Calculus cal, int u, int v);

// d_f from the slope of ln N_g = n ln(U+V) + ln strength against
// ln L = n ln U at the exact threshold, generations [n_min, n_max].
ScalingFit fractal_dimension_fit(Calculus cal, int u, int v, int n_min = 20,
                                 int n_max = 37);

enum class BetaMethod {
  OrderParameter,  // ln strength vs ln(w - w_th) at fixed n = 150
  Slope,           // -nu * d ln strength / d ln L at the threshold
};

struct BetaOptions {
  int n_layers = 150;          // OrderParameter: depth of the iteration
  double delta_min = 1e-4;     // OrderParameter: w - w_th window
  double delta_max = 1e-2;
  int delta_points = 13;
  int n_min = 20;              // Slope: generation window
  int n_max = 37;
};

ScalingFit beta_fit(Calculus cal, int u, int v, BetaMethod method,
                    const BetaOptions& opts = {});

// d - d_f - beta/nu with the module defaults: nu exact, d_f from
// fractal_dimension_fit, beta from the slope estimator on the same
// generation window, so the relation tests the internal consistency of the
// strength data.
double hyperscaling_residual(Calculus cal, int u, int v);

}  // namespace conperc
