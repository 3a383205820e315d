#include "conperc/broyden.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace conperc {

namespace {

Eigen::VectorXd eval(const ResidualFn& fn, const Eigen::VectorXd& x) {
  std::vector<double> xv(x.data(), x.data() + x.size());
  std::vector<double> fv = fn(xv);
  if (fv.size() != static_cast<std::size_t>(x.size())) {
    throw std::invalid_argument("broyden_solve: residual dimension mismatch");
  }
  return Eigen::Map<Eigen::VectorXd>(fv.data(), fv.size());
}

Eigen::VectorXd clamp_box(Eigen::VectorXd x, double eps) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    x[i] = std::clamp(x[i], eps, 1.0 - eps);
  }
  return x;
}

Eigen::MatrixXd fd_jacobian(const ResidualFn& fn, const Eigen::VectorXd& x,
                            const Eigen::VectorXd& f, double h, double eps) {
  const Eigen::Index n = x.size();
  Eigen::MatrixXd jac(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    Eigen::VectorXd xp = x;
    xp[j] = std::min(xp[j] + h, 1.0 - eps);
    if (xp[j] == x[j]) xp[j] = x[j] - h;
    jac.col(j) = (eval(fn, xp) - f) / (xp[j] - x[j]);
  }
  return jac;
}

}  // namespace

std::vector<double> broyden_solve(const ResidualFn& residual,
                                  std::vector<double> x0,
                                  const BroydenOptions& opts) {
  const Eigen::Index n = static_cast<Eigen::Index>(x0.size());
  if (n == 0) throw std::invalid_argument("broyden_solve: empty start vector");

  Eigen::VectorXd x =
      clamp_box(Eigen::Map<Eigen::VectorXd>(x0.data(), n), opts.clamp_eps);
  Eigen::VectorXd f = eval(residual, x);
  Eigen::MatrixXd jac = fd_jacobian(residual, x, f, opts.fd_step, opts.clamp_eps);

  double best = f.cwiseAbs().maxCoeff();
  bool restarted = false;

  for (int it = 0; it < opts.max_iter; ++it) {
    const double res = f.cwiseAbs().maxCoeff();
    best = std::min(best, res);
    if (res <= opts.tol) {
      return std::vector<double>(x.data(), x.data() + n);
    }

    Eigen::VectorXd dx = jac.fullPivLu().solve(-f);
    if (!dx.allFinite() || dx.norm() == 0.0) dx = -f;

    Eigen::VectorXd xn = clamp_box(x + dx, opts.clamp_eps);
    Eigen::VectorXd fnew = eval(residual, xn);
    double t = 1.0;
    while (fnew.norm() > f.norm() && t > 1e-4) {
      t *= 0.5;
      xn = clamp_box(x + t * dx, opts.clamp_eps);
      fnew = eval(residual, xn);
    }

    const Eigen::VectorXd step = xn - x;
    const double denom = step.squaredNorm();
    if (denom > 0.0) {
      jac += (fnew - f - jac * step) * step.transpose() / denom;
    } else if (!restarted) {
      // stalled against the box; rebuild the Jacobian once
      jac = fd_jacobian(residual, xn, fnew, opts.fd_step, opts.clamp_eps);
      restarted = true;
    }
    x = xn;
    f = fnew;

    if (!restarted && it == opts.max_iter / 2 &&
        f.cwiseAbs().maxCoeff() > 1e3 * opts.tol) {
      jac = fd_jacobian(residual, x, f, opts.fd_step, opts.clamp_eps);
      restarted = true;
    }
  }
  if (f.cwiseAbs().maxCoeff() <= opts.tol) {
    return std::vector<double>(x.data(), x.data() + n);
  }
  throw SolverError("broyden_solve: no convergence after " +
                        std::to_string(opts.max_iter) +
                        " iterations (best residual " + std::to_string(best) +
                        ")",
                    best);
}

}  // namespace conperc
