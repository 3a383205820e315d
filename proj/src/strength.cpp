#include "conperc/strength.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "conperc/flower.hpp"
#include "conperc/network.hpp"

namespace conperc {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct RouteExponents {
  // A = para(seri(x, w^ax), seri(y, w^ay)); B = para(seri(x, w^bx), seri(y, w^by))
  int ax, ay, bx, by;
};

// Branches 0..U-1 sit on the short arm at offset a; branches U..U+V-1 on the
// long arm at offset b. The route exponents follow the layer equations: to
// one motif terminal directly along the own arm, to the other either around
// the far end of the own arm or through the opposite arm.
RouteExponents route_exponents(int u, int v, int branch) {
  if (branch < u) {
    const int a = branch;
    return {a, u + v - 1 - a, u - 1 - a, v + a};
  }
  const int b = branch - u;
  return {b, u + v - 1 - b, v - 1 - b, u + b};
}

struct RoutePair {
  double a, b;
};

RoutePair routes_closed(Calculus cal, int u, int v, int branch, double w,
                        double x, double y) {
  const RouteExponents e = route_exponents(u, v, branch);
  const double a = para(cal, seri(cal, x, std::pow(w, e.ax)),
                        seri(cal, y, std::pow(w, e.ay)));
  const double b = para(cal, seri(cal, x, std::pow(w, e.bx)),
                        seri(cal, y, std::pow(w, e.by)));
  return {a, b};
}

// Same two route weights, but read off explicit motif graphs (node 0 = bulk
// node, 1/2 = subflower endpoints, 3 = the motif terminal being reached) via
// the reduction module. The layer equations pair x with the offset exponent
// in the first route and with the arm-remainder exponent in the second, so
// the second graph carries the mirrored state.
RoutePair routes_graph(Calculus cal, int u, int v, int branch, double w,
                       double x, double y) {
  const RouteExponents e = route_exponents(u, v, branch);
  auto route = [&](double near_state, int near_links, double far_state,
                   int far_links) {
    TwoTerminalNetwork net;
    net.add_edge(0, 1, near_state);
    net.add_edge(0, 2, far_state);
    int next = 4;
    auto chain = [&](int from, int to, int links) {
      if (links == 0) {
        net.add_edge(from, to, 1.0);  // coincident terminals, unit bridge
        return;
      }
      int prev = from;
      for (int i = 0; i < links - 1; ++i) {
        net.add_edge(prev, next, w);
        prev = next++;
      }
      net.add_edge(prev, to, w);
    };
    chain(1, 3, near_links);
    chain(2, 3, far_links);
    net.a = 0;
    net.b = 3;
    return reduce_two_terminal(cal, net);
  };
  return {route(x, e.ax, y, e.ay), route(x, e.bx, y, e.by)};
}

RoutePair routes(Calculus cal, int u, int v, int branch, double w, double x,
                 double y, TransferVariant variant) {
  return variant == TransferVariant::ClosedForm
             ? routes_closed(cal, u, v, branch, w, x, y)
             : routes_graph(cal, u, v, branch, w, x, y);
}

struct LayerStep {
  double x, y;
  double ratio;  // t'/t
};

LayerStep branch_step(Calculus cal, int u, int v, int branch, double w,
                      double x, double y, TransferVariant variant) {
  const double r = rg_map(cal, u, v, w);
  const RoutePair ab = routes(cal, u, v, branch, w, x, y, variant);
  if (ab.a <= 0.0 || ab.b <= 0.0 || r <= 0.0) {
    return {0.0, 0.0, 0.0};
  }
  // x' y' = r with both in [0,1] forces x' into [r, 1]; states far from the
  // self-consistent manifold would otherwise push the raw root outside and
  // let t grow, which the amplitude channel must not do
  const double xp = std::clamp(std::sqrt(r * ab.a / ab.b), r, 1.0);
  return {xp, r / xp, std::fmin(ab.a / xp, 1.0)};
}

void check_branch(int u, int v, int branch) {
  if (branch < 0 || branch >= u + v) {
    throw std::domain_error("transfer_step: branch out of range");
  }
}

}  // namespace

TransferState transfer_step(Calculus cal, int u, int v, int branch, double w,
                            const TransferState& state,
                            TransferVariant variant) {
  check_branch(u, v, branch);
  if (!(w >= 0.0 && w <= 1.0)) {
    throw std::domain_error("transfer_step: weight out of [0, 1]");
  }
  const LayerStep s = branch_step(cal, u, v, branch, w, state.x, state.y, variant);
  TransferState out;
  out.x = s.x;
  out.y = s.y;
  out.ln_t = s.ratio > 0.0 ? state.ln_t + std::log(s.ratio) : kNegInf;
  return out;
}

double strength_iterate(Calculus cal, int u, int v, int n, double w,
                        TransferVariant variant, bool seed_unit) {
  if (n < 1) throw std::domain_error("strength_iterate: n >= 1");
  if (!(w >= 0.0 && w <= 1.0)) {
    throw std::domain_error("strength_iterate: weight out of [0, 1]");
  }
  double s = w;
  double x = seed_unit ? 1.0 : w;
  double y = x;
  double ln_t = 0.0;
  const int nb = u + v;
  for (int layer = 0; layer < n; ++layer) {
    double sx = 0.0, sy = 0.0, sr = 0.0;
    for (int branch = 0; branch < nb; ++branch) {
      const LayerStep st = branch_step(cal, u, v, branch, s, x, y, variant);
      sx += st.x;
      sy += st.y;
      sr += st.ratio;
    }
    const double mean_ratio = sr / nb;
    if (mean_ratio <= 0.0) return kNegInf;
    ln_t += std::log(mean_ratio);
    x = sx / nb;
    y = sy / nb;
    s = rg_map(cal, u, v, s);
  }
  return ln_t;
}

double critical_ratio(Calculus cal, int u, int v) {
  const double wth = threshold_exact(cal, u, v);
  const int nb = u + v;
  double x = std::sqrt(wth), y = x;
  double ratio = 0.0;
  for (int layer = 0; layer < 500; ++layer) {
    double sx = 0.0, sy = 0.0, sr = 0.0;
    for (int branch = 0; branch < nb; ++branch) {
      const LayerStep st =
          branch_step(cal, u, v, branch, wth, x, y, TransferVariant::ClosedForm);
      sx += st.x;
      sy += st.y;
      sr += st.ratio;
    }
    const double next = sr / nb;
    x = sx / nb;
    y = sy / nb;
    if (layer > 0 && std::fabs(next - ratio) < 1e-15) return next;
    ratio = next;
  }
  return ratio;
}

ScalingFit fractal_dimension_fit(Calculus cal, int u, int v, int n_min,
                                 int n_max) {
  if (n_min < 1 || n_max < n_min + 2) {
    throw std::domain_error("fractal_dimension_fit: bad generation range");
  }
  const double wth = threshold_exact(cal, u, v);
  const double ln_uv = std::log(double(u + v));
  const double ln_u = std::log(double(u));
  std::vector<std::pair<double, double>> pts;
  for (int n = n_min; n <= n_max; ++n) {
    const double ln_strength = strength_iterate(cal, u, v, n, wth);
    pts.emplace_back(n * ln_u, n * ln_uv + ln_strength);
  }
  return fit_slope(pts);
}

ScalingFit beta_fit(Calculus cal, int u, int v, BetaMethod method,
                    const BetaOptions& opts) {
  const double wth = threshold_exact(cal, u, v);
  if (method == BetaMethod::OrderParameter) {
    if (opts.delta_points < 3 || opts.delta_min <= 0.0 ||
        opts.delta_max <= opts.delta_min) {
      throw std::domain_error("beta_fit: bad delta window");
    }
    if (wth + opts.delta_max >= 1.0) {
      throw std::runtime_error(
          "beta_fit: insufficient dynamic range above threshold");
    }
    std::vector<std::pair<double, double>> pts;
    const double lr = std::log(opts.delta_max / opts.delta_min) /
                      (opts.delta_points - 1);
    for (int i = 0; i < opts.delta_points; ++i) {
      const double delta = opts.delta_min * std::exp(lr * i);
      const double ln_strength =
          strength_iterate(cal, u, v, opts.n_layers, wth + delta);
      if (!std::isfinite(ln_strength)) {
        throw std::runtime_error("beta_fit: strength underflowed in window");
      }
      pts.emplace_back(std::log(delta), ln_strength);
    }
    return fit_slope(pts);
  }
  // Slope estimator: beta = -nu * d ln strength / d ln L at threshold.
  const double nu = nu_exact(cal, u, v);
  const double ln_u = std::log(double(u));
  std::vector<std::pair<double, double>> pts;
  for (int n = opts.n_min; n <= opts.n_max; ++n) {
    pts.emplace_back(n * ln_u, strength_iterate(cal, u, v, n, wth));
  }
  ScalingFit raw = fit_slope(pts);
  ScalingFit fit;
  fit.points = raw.points;
  fit.exponent = -nu * raw.exponent;
  fit.stderr_ = nu * raw.stderr_;
  return fit;
}

double hyperscaling_residual(Calculus cal, int u, int v) {
  const double d = dimension(u, v);
  const double nu = nu_exact(cal, u, v);
  const ScalingFit df = fractal_dimension_fit(cal, u, v);
  const ScalingFit beta = beta_fit(cal, u, v, BetaMethod::Slope);
  return d - df.exponent - beta.exponent / nu;
}

}  // namespace conperc
