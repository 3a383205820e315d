#include "conperc/flower.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace conperc {

namespace {

void check_uv(int u, int v) {
  if (u < 1 || v < u) throw std::domain_error("flower requires 1 <= U <= V");
}

void require_u2(int u) {
  if (u < 2) {
    throw std::domain_error(
        "U >= 2 required (U = 1 has divergent dimension; thresholds and "
        "exponents are undefined)");
  }
}

void check_w(double w) {
  if (!(w >= 0.0 && w <= 1.0)) {
    throw std::domain_error("weight out of [0, 1]");
  }
}

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double flo, int iters) {
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

void FlowerSpec::validate() const {
  check_uv(u, v);
  if (n < 0) throw std::domain_error("generation must be >= 0");
}

double dimension(int u, int v) {
  check_uv(u, v);
  require_u2(u);
  return std::log(double(u + v)) / std::log(double(u));
}

double rg_map(Calculus cal, int u, int v, double w) {
  check_uv(u, v);
  check_w(w);
  if (cal == Calculus::Classical) {
    const double pu = std::pow(w, u), pv = std::pow(w, v);
    return pu + pv - pu * pv;
  }
  const double f = f_of_c(std::pow(w, u)) * f_of_c(std::pow(w, v));
  return c_of_f(std::fmax(f, 0.5));
}

double sponge_crossing(Calculus cal, int u, int v, int n, double w) {
  if (n < 0) throw std::domain_error("generation must be >= 0");
  check_w(w);
  for (int i = 0; i < n; ++i) w = rg_map(cal, u, v, w);
  return w;
}

double threshold_exact(Calculus cal, int u, int v) {
  check_uv(u, v);
  require_u2(u);
  const auto g = [&](double w) { return rg_map(cal, u, v, w) - w; };
  const double lo = 1e-9, hi = 1.0 - 1e-9;
  const double flo = g(lo), fhi = g(hi);
  if ((flo <= 0.0) == (fhi <= 0.0)) {
    throw std::runtime_error("threshold_exact: no sign change in (0, 1)");
  }
  return bisect(g, lo, hi, flo, 100);
}

double threshold_gap(Calculus cal, int u, double v_real) {
  require_u2(u);
  if (v_real < u) throw std::domain_error("threshold_gap: V must be >= U");
  const double V = v_real;
  const auto g = [&](double s) {
    const double l1p = std::log1p(-s / V);  // ln w
    if (cal == Calculus::Classical) {
      // R(w) - w = p^V (1 - p^U) - p (1 - p^{U-1}), each factor computed to
      // full relative precision
      const double pv = std::exp(double(V) * l1p);
      const double one_m_pu = -std::expm1(double(u) * l1p);
      const double p = std::exp(l1p);
      const double one_m_pum1 = -std::expm1(double(u - 1) * l1p);
      return pv * one_m_pu - p * one_m_pum1;
    }
    const double hu = std::sqrt(-std::expm1(2.0 * double(u) * l1p));
    const double hv = std::sqrt(-std::expm1(2.0 * V * l1p));
    const double h1 = std::sqrt(-std::expm1(2.0 * l1p));
    // F(w^U) F(w^V) - F(w); the fixed point of the quantum map
    return 0.25 * (1.0 + hu) * (1.0 + hv) - 0.5 * (1.0 + h1);
  };
  const double lo = 1e-12, hi = 0.999 * V;
  const double flo = g(lo), fhi = g(hi);
  if ((flo <= 0.0) == (fhi <= 0.0)) {
    throw std::runtime_error("threshold_gap: no sign change");
  }
  return bisect(g, lo, hi, flo, 200);
}

double rg_map_gap(Calculus cal, int u, double v_real, double s) {
  require_u2(u);
  const double V = v_real;
  if (V < u) throw std::domain_error("rg_map_gap: V must be >= U");
  if (!(s >= 0.0 && s <= V)) {
    throw std::domain_error("rg_map_gap: s must lie in [0, V]");
  }
  const double l1p = std::log1p(-s / V);  // ln w
  if (cal == Calculus::Classical) {
    const double one_m_pu = -std::expm1(double(u) * l1p);
    const double one_m_pv = -std::expm1(V * l1p);
    return V * one_m_pu * one_m_pv;
  }
  const double hu = std::sqrt(-std::expm1(2.0 * double(u) * l1p));
  const double hv = std::sqrt(-std::expm1(2.0 * V * l1p));
  // g = 2 F(w^U) F(w^V) - 1 = [hU (1 + hV) - (1 - hV)] / 2, with
  // 1 - hV = w^{2V} / (1 + hV) so no cancellation against 1 survives
  const double w2v = std::exp(2.0 * V * l1p);
  const double g = 0.5 * (hu * (1.0 + hv) - w2v / (1.0 + hv));
  if (g <= 0.0) return 0.0;  // saturated parallel bundle: c' = 1
  const double one_m_c =
      g * g / (1.0 + std::sqrt(std::fmax(0.0, (1.0 - g) * (1.0 + g))));
  return V * one_m_c;
}

double finite_size_threshold(Calculus cal, int u, int v, int n,
                             double target) {
  check_uv(u, v);
  require_u2(u);
  if (n < 1) throw std::domain_error("finite_size_threshold: n >= 1");
  if (!(target > 0.0 && target < 1.0)) {
    throw std::domain_error("finite_size_threshold: target must be in (0,1)");
  }
  const auto g = [&](double w) {
    return sponge_crossing(cal, u, v, n, w) - target;
  };
  return bisect(g, 0.0, 1.0, g(0.0), 100);
}

double nu_exact(Calculus cal, int u, int v) {
  const double wth = threshold_exact(cal, u, v);
  double deriv;
  if (cal == Calculus::Classical) {
    deriv = u * std::pow(wth, u - 1) + v * std::pow(wth, v - 1) -
            (u + v) * std::pow(wth, u + v - 1);
  } else {
    const double h = 1e-7;
    const auto r = [&](double w) { return rg_map(cal, u, v, w); };
    const double d1 = (r(wth + h) - r(wth - h)) / (2.0 * h);
    const double d2 = (r(wth + 2.0 * h) - r(wth - 2.0 * h)) / (4.0 * h);
    deriv = (4.0 * d1 - d2) / 3.0;  // one Richardson step
  }
  if (deriv <= 1.0) {
    throw std::runtime_error("nu_exact: fixed point has no relevant direction");
  }
  return std::log(double(u)) / std::log(deriv);
}

ScalingFit nu_fit(Calculus cal, int u, int v, int n_min, int n_max,
                  double target, int window) {
  if (n_min < 1 || n_max < n_min) {
    throw std::domain_error("nu_fit: bad generation range");
  }
  const double wth = threshold_exact(cal, u, v);
  std::vector<std::pair<double, double>> pts;
  bool truncated = false;
  for (int n = n_min; n <= n_max; ++n) {
    const double diff =
        std::fabs(finite_size_threshold(cal, u, v, n, target) - wth);
    if (diff < 1e-15) {
      truncated = true;
      continue;
    }
    pts.emplace_back(n * std::log(double(u)), std::log(diff));
  }
  if (int(pts.size()) > window) {
    pts.erase(pts.begin(), pts.end() - window);
  }
  ScalingFit raw = fit_slope(pts);
  ScalingFit fit;
  fit.points = raw.points;
  fit.truncated = truncated;
  fit.exponent = -1.0 / raw.exponent;
  // delta method: sigma(nu) = sigma(slope) / slope^2
  fit.stderr_ = raw.stderr_ / (raw.exponent * raw.exponent);
  return fit;
}

PathEnsemble decompose_paths(int u, int v, int n) {
  check_uv(u, v);
  if (n < 0) throw std::domain_error("generation must be >= 0");
  PathEnsemble ens;
  for (int k = 0; k <= n; ++k) {
    // length U^{n-k} V^k with overflow detection
    unsigned long long len = 1;
    auto mul = [&](unsigned long long f) {
      if (f != 0 && len > ~0ULL / f) {
        throw std::overflow_error(
            "decompose_paths: path length exceeds 64 bits; work with "
            "log-space lengths instead");
      }
      len *= f;
    };
    for (int i = 0; i < n - k; ++i) mul((unsigned long long)(u));
    for (int i = 0; i < k; ++i) mul((unsigned long long)(v));
    unsigned long long mult = 1;  // binomial(n, k), exact for n <= 61
    for (int i = 1; i <= k; ++i) {
      mult = mult * (unsigned long long)(n - k + i) / (unsigned long long)(i);
    }
    ens.entries.push_back({len, mult});
  }
  std::sort(ens.entries.begin(), ens.entries.end(),
            [](const auto& a, const auto& b) {
              return a.length != b.length ? a.length < b.length
                                          : a.multiplicity < b.multiplicity;
            });
  return ens;
}

}  // namespace conperc
