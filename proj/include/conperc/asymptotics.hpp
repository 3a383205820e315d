#pragma once

#include <utility>

#include "conperc/calculus.hpp"

namespace conperc {

// Closed-form V -> infinity results. V enters only through ln V in the
// quantum expressions, so these accept ln V directly and stay finite for
// ln V up to 1e4. A = ln(U/(U-1)) throughout.

double a_const(int u);  // ln(U/(U-1)), requires U >= 2

// Leading classical threshold: 1 - A/V.
double pth_asymptotic(int u, double v);

// Root m of  m + ln(m)/2 - ln(V)/2 + ln(4(sqrt(U)-1)) = 0  (unique: the left
// side is strictly increasing). Throws when ln V is too small for a root.
double m_solve(int u, double ln_v);

// Leading quantum threshold 1 - m/(2V): the gap carries the (ln V)/4 prefactor.
double cth_asymptotic(int u, double v);

// Exact sponge-crossing connectivity along the long arm at criticality:
// (p_th^V, c_th^V), computed from the exact thresholds in the gap variable.
// Asymptotes: (U-1)/U and V^{-1/4}.
std::pair<double, double> long_path_crossing(int u, double v);

// Exact fixed-point derivatives R'(w_th) evaluated in the gap variable, valid
// for any real V >= U (including V far beyond where w_th is representable
// away from 1). nu = ln U / ln(lambda).
double lambda_exact(Calculus cal, int u, double v);
double nu_exact_large_v(Calculus cal, int u, double v);

// The three approximation tiers for the quantum derivative lambda:
//   tier 1: the full m-based expression,
//   tier 2: sqrt(U) + (K/2) m with K = 4(sqrt(U)-1),
//   tier 3: ln(lambda) ~ ln ln V, i.e. lambda = ln V.
double lambda_tier1(int u, double ln_v);
double lambda_tier2(int u, double ln_v);
double lambda_tier3(double ln_v);

// V -> infinity limits of Table 1.
struct Table1Limits {
  double nu_classical;         // ln U / ln(1 + (U-1) A)
  double d_minus_df_classical; // [ln U - ln((1-U) + 2/A)] / ln U
  double beta_classical;       // [ln U - ln((1-U) + 2/A)] / ln(1 + (U-1) A)
  double nu_quantum;           // ln U / ln ln V (leading)
  double d_minus_df_quantum;   // ln ln V / ln U (leading)
  double beta_quantum;         // 1 (leading)
  double m;                    // m_solve root backing the quantum entries
};
Table1Limits table1_exponents(int u, double ln_v);

// Flower detouring theory: with every long arm stretched V -> qV, the
// thresholds of Eqs. for p_th and c_th rearrange to the resilience factors
//   A_p = ln(U/(U-1)) / 2           (q-independent)
//   A_c = sqrt(V) sqrt(q ln q / 8)
double resilience_theory_classical(int u);
double resilience_theory_quantum(int u, int v, double q);

}  // namespace conperc
