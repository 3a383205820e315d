#include "conperc/asymptotics.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "conperc/flower.hpp"

namespace conperc {

namespace {

void require_u2(int u) {
  if (u < 2) throw std::domain_error("asymptotics require U >= 2");
}

double bisect(const std::function<double(double)>& f, double lo, double hi,
              int iters) {
  double flo = f(lo);
  for (int i = 0; i < iters; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double fm = f(mid);
    if ((flo <= 0.0) == (fm <= 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double a_const(int u) {
  require_u2(u);
  return std::log(double(u) / double(u - 1));
}

double pth_asymptotic(int u, double v) {
  require_u2(u);
  if (v < u) throw std::domain_error("pth_asymptotic: V >= U required");
  return 1.0 - a_const(u) / v;
}

double m_solve(int u, double ln_v) {
  require_u2(u);
  const double ln_k = std::log(4.0 * (std::sqrt(double(u)) - 1.0));
  // rearranged: m + ln(m)/2 = ln(V)/2 - ln K, meaningful only with a
  // positive right-hand side
  if (0.5 * ln_v - ln_k <= 0.0) {
    throw std::domain_error(
        "m_solve: V below the asymptotic regime; need ln V > " +
        std::to_string(2.0 * ln_k) + " for U = " + std::to_string(u));
  }
  const auto f = [&](double m) {
    return m + 0.5 * std::log(m) - 0.5 * ln_v + ln_k;
  };
  const double lo = 1e-6;
  const double hi = std::fmax(ln_v, 2.0);
  if (f(lo) > 0.0 || f(hi) < 0.0) {
    throw std::domain_error("m_solve: no root in the bracket");
  }
  return bisect(f, lo, hi, 200);
}

double cth_asymptotic(int u, double v) {
  if (v < u) throw std::domain_error("cth_asymptotic: V >= U required");
  return 1.0 - m_solve(u, std::log(v)) / (2.0 * v);
}

std::pair<double, double> long_path_crossing(int u, double v) {
  require_u2(u);
  const double sp = threshold_gap(Calculus::Classical, u, v);
  const double sq = threshold_gap(Calculus::Quantum, u, v);
  const double pv = std::exp(v * std::log1p(-sp / v));
  const double cv = std::exp(v * std::log1p(-sq / v));
  return {pv, cv};
}

double lambda_exact(Calculus cal, int u, double v) {
  require_u2(u);
  const double s = threshold_gap(cal, u, v);
  const double l1p = std::log1p(-s / v);  // ln w_th
  if (cal == Calculus::Classical) {
    return u * std::exp((u - 1) * l1p) + v * std::exp((v - 1) * l1p) -
           (u + v) * std::exp((u + v - 1) * l1p);
  }
  // dC'/dC at the fixed point C' = C = c^2, from differentiating
  // F(c') = F(c^U) F(c^V) in the C variable; equals dc'/dc there.
  const double omc = -std::expm1(2.0 * l1p);            // 1 - C
  const double omcu = -std::expm1(2.0 * u * l1p);       // 1 - C^U
  const double omcv = -std::expm1(2.0 * v * l1p);       // 1 - C^V
  const double cu = std::exp(2.0 * u * l1p);
  const double cv = std::exp(2.0 * v * l1p);
  const double c2 = std::exp(2.0 * l1p);
  return 0.5 * std::sqrt(omc) / c2 *
         (u * cu * (1.0 + std::sqrt(omcv)) / std::sqrt(omcu) +
          v * cv * (1.0 + std::sqrt(omcu)) / std::sqrt(omcv));
}

double nu_exact_large_v(Calculus cal, int u, double v) {
  const double lambda = lambda_exact(cal, u, v);
  if (lambda <= 1.0) {
    throw std::runtime_error("nu_exact_large_v: derivative <= 1");
  }
  return std::log(double(u)) / std::log(lambda);
}

double lambda_tier1(int u, double ln_v) {
  const double m = m_solve(u, ln_v);
  const double em = std::exp(-m);
  const double som = std::sqrt(1.0 - em);
  // m/V terms vanish beyond double range; exp(ln V / 2 - m) stays O(m)
  // through the m-equation, so evaluate it in log form.
  const double mu_over_v = ln_v < 700.0 ? m * u / std::exp(ln_v) : 0.0;
  const double m_over_v = ln_v < 700.0 ? m / std::exp(ln_v) : 0.0;
  const double first =
      std::sqrt(double(u)) * (1.0 - mu_over_v) * (1.0 + som);
  const double second = std::sqrt(m) * std::exp(0.5 * ln_v - m) *
                        (1.0 + std::sqrt(mu_over_v)) / som;
  return 0.5 * (1.0 + m_over_v) * (first + second);
}

double lambda_tier2(int u, double ln_v) {
  const double m = m_solve(u, ln_v);
  const double k = 4.0 * (std::sqrt(double(u)) - 1.0);
  return std::sqrt(double(u)) + 0.5 * k * m;
}

double lambda_tier3(double ln_v) {
  if (ln_v <= 1.0) throw std::domain_error("lambda_tier3: ln V > 1 required");
  return ln_v;
}

Table1Limits table1_exponents(int u, double ln_v) {
  require_u2(u);
  const double a = a_const(u);
  const double ln_u = std::log(double(u));
  Table1Limits t;
  t.nu_classical = ln_u / std::log(1.0 + (u - 1) * a);
  const double top = ln_u - std::log((1.0 - u) + 2.0 / a);
  t.d_minus_df_classical = top / ln_u;
  t.beta_classical = top / std::log(1.0 + (u - 1) * a);
  t.m = m_solve(u, ln_v);
  t.nu_quantum = ln_u / std::log(ln_v);
  t.d_minus_df_quantum = std::log(ln_v) / ln_u;
  t.beta_quantum = 1.0;
  return t;
}

double resilience_theory_classical(int u) { return 0.5 * a_const(u); }

double resilience_theory_quantum(int u, int v, double q) {
  require_u2(u);
  if (v < u) throw std::domain_error("resilience theory: V >= U");
  if (q < 1.0) throw std::domain_error("resilience theory: q >= 1");
  return std::sqrt(double(v)) * std::sqrt(q * std::log(q) / 8.0);
}

}  // namespace conperc
