#include <stdexcept>
#include <cmath>

#include "conperc/asymptotics.hpp"
#include "conperc/flower.hpp"
#include "doctest.h"

using namespace conperc;

TEST_CASE("classical threshold asymptote 1 - ln2 / V for U = 2") {
  CHECK(pth_asymptotic(2, 100.0) ==
        doctest::Approx(1.0 - std::log(2.0) / 100.0).epsilon(1e-15));
  // measured: the relative gap error shrinks like 0.153/V, so 1.6e-5 at
  // V = 1e4 and 1.6e-7 at V = 1e6
  const double s4 = threshold_gap(Calculus::Classical, 2, 1e4);
  CHECK(std::fabs(s4 / std::log(2.0) - 1.0) < 2e-5);
  const double s6 = threshold_gap(Calculus::Classical, 2, 1e6);
  CHECK(std::fabs(s6 / std::log(2.0) - 1.0) < 2e-7);
  // (1 - p_th) V -> ln 2 monotonically over decades
  double prev = 1e9;
  for (double vv : {1e2, 1e3, 1e4, 1e5, 1e6}) {
    const double gap = threshold_gap(Calculus::Classical, 2, vv);
    CHECK(std::fabs(gap - std::log(2.0)) < std::fabs(prev - std::log(2.0)));
    prev = gap;
  }
}

TEST_CASE("m equation root") {
  CHECK(m_solve(2, 20.0) == doctest::Approx(8.43).epsilon(1e-3));
  // unique root: the left side is strictly increasing in m
  const double m = m_solve(2, 50.0);
  const double lnk = std::log(4.0 * (std::sqrt(2.0) - 1.0));
  CHECK(m + 0.5 * std::log(m) - 25.0 + lnk ==
        doctest::Approx(0.0).epsilon(1e-10));
  CHECK_THROWS_AS(m_solve(2, 0.1), std::domain_error);
}

TEST_CASE("m approaches ln(V)/2 from below; the ratio climbs to 1") {
  double prev_ratio = 0.0;
  for (double lnv : {20.0, 200.0, 2000.0}) {
    const double ratio = m_solve(2, lnv) / (0.5 * lnv);
    CHECK(ratio > prev_ratio);
    CHECK(ratio < 1.0);
    prev_ratio = ratio;
  }
  CHECK(prev_ratio > 0.99);
}

TEST_CASE("quantum threshold gap tracks the m root") {
  for (double v : {1e4, 1e5, 1e6}) {
    const double s = threshold_gap(Calculus::Quantum, 2, v);
    const double m = m_solve(2, std::log(v));
    // c = 1 - m/(2V) means 2s should approach m
    CHECK(std::fabs(2.0 * s / m - 1.0) < 0.01);
    CHECK(cth_asymptotic(2, v) == doctest::Approx(1.0 - m / (2.0 * v)));
  }
}

TEST_CASE("long-path crossing: exact values and asymptotes") {
  // symmetric flower: both values are threshold^U
  const auto [pv, cv] = long_path_crossing(2, 2.0);
  const double pth = threshold_exact(Calculus::Classical, 2, 2);
  const double cth = threshold_exact(Calculus::Quantum, 2, 2);
  CHECK(pv == doctest::Approx(pth * pth).epsilon(1e-10));
  CHECK(cv == doctest::Approx(cth * cth).epsilon(1e-10));
  // V -> infinity: p_th^V -> 1/2, c_th^V ~ V^{-1/4}
  const auto [pv6, cv6] = long_path_crossing(2, 1e6);
  CHECK(std::fabs(pv6 - 0.5) < 0.01);
  const auto [pv5, cv5] = long_path_crossing(2, 1e5);
  const double k6 = cv6 * std::pow(1e6, 0.25);
  const double k5 = cv5 * std::pow(1e5, 0.25);
  CHECK(std::fabs(k6 / k5 - 1.0) < 0.10);
}

TEST_CASE("exact classical nu decreases monotonically to the Table-1 limit") {
  const double limit = table1_exponents(2, 50.0).nu_classical;
  CHECK(limit == doctest::Approx(std::log(2.0) / std::log(1.0 + std::log(2.0)))
                     .epsilon(1e-15));
  double prev = 10.0;
  for (double v : {2.0, 5.0, 10.0, 100.0, 1000.0, 1e4, 1e5}) {
    const double nu = nu_exact_large_v(Calculus::Classical, 2, v);
    CHECK(nu > limit);
    CHECK(nu < prev);
    prev = nu;
  }
  CHECK(prev - limit < 1e-4);
}

TEST_CASE("exact derivative route matches the flower module at small V") {
  for (Calculus cal : {Calculus::Classical, Calculus::Quantum}) {
    const double via_gap = nu_exact_large_v(cal, 2, 2.0);
    const double via_flower = nu_exact(cal, 2, 2);
    CHECK(via_gap == doctest::Approx(via_flower).epsilon(1e-6));
  }
}

TEST_CASE("quantum lambda tiers: ordering, tiers 1-2 agreement") {
  for (double lnv : {50.0, 100.0, 1000.0}) {
    const double l1 = lambda_tier1(2, lnv);
    const double l2 = lambda_tier2(2, lnv);
    const double l3 = lambda_tier3(lnv);
    CHECK(std::fabs(l1 / l2 - 1.0) < 0.01);
    CHECK(l3 > l2);  // the ln-ln tier overshoots lambda itself
    // each tier's nu decreases with V
  }
  double prev1 = 1e9, prev3 = 1e9;
  for (double lnv : {20.0, 50.0, 200.0, 1000.0, 10000.0}) {
    const double nu1 = std::log(2.0) / std::log(lambda_tier1(2, lnv));
    const double nu3 = std::log(2.0) / std::log(lambda_tier3(lnv));
    CHECK(nu1 < prev1);
    CHECK(nu3 < prev3);
    prev1 = nu1;
    prev3 = nu3;
  }
}

TEST_CASE("Table 1 classical limits for U = 2") {
  const Table1Limits t = table1_exponents(2, 100.0);
  const double a = std::log(2.0);
  CHECK(t.nu_classical == doctest::Approx(std::log(2.0) / std::log(1.0 + a)));
  const double top = std::log(2.0) - std::log(-1.0 + 2.0 / a);
  CHECK(t.d_minus_df_classical == doctest::Approx(top / std::log(2.0)));
  CHECK(t.beta_classical == doctest::Approx(top / std::log(1.0 + a)));
  CHECK(t.beta_quantum == 1.0);
  CHECK(t.nu_quantum == doctest::Approx(std::log(2.0) / std::log(100.0)));
}

TEST_CASE("quantum nu curves for U = 2, 5, 10 sit closer than classical") {
  const double lnv = 100.0;
  double cl_min = 1e9, cl_max = 0.0, q_min = 1e9, q_max = 0.0;
  for (int u : {2, 5, 10}) {
    const double cl = table1_exponents(u, lnv).nu_classical;
    const double q = std::log(double(u)) / std::log(lambda_tier2(u, lnv));
    cl_min = std::min(cl_min, cl);
    cl_max = std::max(cl_max, cl);
    q_min = std::min(q_min, q);
    q_max = std::max(q_max, q);
  }
  CHECK(q_max / q_min < cl_max / cl_min);
}

TEST_CASE("the (ln V)/4 gap prefactor decouples from U") {
  // m(U, V) differs across U only by an additive ln K(U) shift, so the
  // ratio of roots for U = 2 and U = 10 climbs to 1
  double prev = 0.0;
  for (double lnv : {50.0, 500.0, 5000.0}) {
    const double ratio = m_solve(10, lnv) / m_solve(2, lnv);
    CHECK(ratio > prev);
    CHECK(ratio < 1.0);
    prev = ratio;
  }
  CHECK(prev > 0.999);
}

TEST_CASE("resilience theory closed forms") {
  CHECK(resilience_theory_quantum(2, 2, 1.0) == 0.0);  // ln 1 = 0
  CHECK(resilience_theory_classical(2) ==
        doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-15));
  const double r =
      resilience_theory_quantum(2, 3, 4.0) / resilience_theory_quantum(2, 3, 2.0);
  CHECK(r == doctest::Approx(2.0).epsilon(1e-12));  // sqrt(4 ln4 / (2 ln2))
  CHECK_THROWS_AS(resilience_theory_quantum(2, 2, 0.5), std::domain_error);
}

TEST_CASE("quantum gap exceeds the classical gap at large V") {
  for (double v : {1e3, 1e5}) {
    CHECK(threshold_gap(Calculus::Quantum, 2, v) >
          threshold_gap(Calculus::Classical, 2, v));
  }
}
