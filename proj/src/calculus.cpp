#include "conperc/calculus.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace conperc {

namespace {

void check_weight(double w) {
  if (!(w >= 0.0 && w <= 1.0)) {
    throw std::domain_error("connectivity weight out of [0, 1]: " +
                            std::to_string(w));
  }
}

double clamp01(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }

}  // namespace

const char* calculus_name(Calculus cal) {
  return cal == Calculus::Classical ? "classical" : "quantum";
}

double f_of_c(double c) {
  // (1-c)(1+c) instead of 1-c^2: keeps precision near c = 1.
  return 0.5 * (1.0 + std::sqrt(std::fmax(0.0, (1.0 - c) * (1.0 + c))));
}

double c_of_f(double f) {
  if (f <= 0.5) return 1.0;
  const double g = 2.0 * f - 1.0;
  return std::sqrt(std::fmax(0.0, (1.0 - g) * (1.0 + g)));
}

double seri(Calculus, std::span<const double> weights) {
  double r = 1.0;
  for (double w : weights) {
    check_weight(w);
    r *= w;
  }
  return clamp01(r);
}

double seri(Calculus cal, double a, double b) {
  const double ws[2] = {a, b};
  return seri(cal, ws);
}

double para(Calculus cal, std::span<const double> weights) {
  if (cal == Calculus::Classical) {
    double miss = 1.0;
    for (double w : weights) {
      check_weight(w);
      miss *= (1.0 - w);
    }
    return clamp01(1.0 - miss);
  }
  double f = 1.0;
  for (double w : weights) {
    check_weight(w);
    f *= f_of_c(w);
  }
  return clamp01(c_of_f(std::fmax(f, 0.5)));
}

double para(Calculus cal, double a, double b) {
  const double ws[2] = {a, b};
  return para(cal, ws);
}

void PathEnsemble::validate() const {
  std::uint64_t prev = 0;
  for (const Entry& e : entries) {
    if (e.length == 0) throw std::domain_error("path length must be positive");
    if (e.multiplicity == 0) {
      throw std::domain_error("path multiplicity must be positive");
    }
    if (e.length < prev) {
      throw std::domain_error("ensemble entries must be sorted by length");
    }
    prev = e.length;
  }
}

std::uint64_t PathEnsemble::total_paths() const {
  std::uint64_t n = 0;
  for (const Entry& e : entries) n += e.multiplicity;
  return n;
}

double ensemble_crossing(Calculus cal, const PathEnsemble& ensemble,
                         double w) {
  if (ensemble.entries.empty()) {
    throw std::domain_error("ensemble_crossing: empty ensemble");
  }
  ensemble.validate();
  check_weight(w);
  const double lnw = std::log(w);  // -inf at w = 0 is fine below
  if (cal == Calculus::Classical) {
    // ln prod_k (1 - p^l_k)^{m_k}
    double ln_miss = 0.0;
    for (const auto& e : ensemble.entries) {
      const double pl = w >= 1.0 ? 1.0 : std::exp(double(e.length) * lnw);
      if (pl >= 1.0) return 1.0;
      ln_miss += double(e.multiplicity) * std::log1p(-pl);
    }
    return clamp01(-std::expm1(ln_miss));
  }
  // ln prod_k F(c^l_k)^{m_k}, saturated at ln(1/2).
  const double ln_half = std::log(0.5);
  double lnf = 0.0;
  for (const auto& e : ensemble.entries) {
    const double cl = w >= 1.0 ? 1.0 : std::exp(double(e.length) * lnw);
    lnf += double(e.multiplicity) * std::log(f_of_c(cl));
    if (lnf <= ln_half) return 1.0;
  }
  return clamp01(c_of_f(std::exp(lnf)));
}

double ensemble_crossing(Calculus cal, const PathEnsemble& ensemble,
                         const LinkWeight& w) {
  const double v = cal == Calculus::Classical ? w.p() : w.c();
  return ensemble_crossing(cal, ensemble, v);
}

}  // namespace conperc
