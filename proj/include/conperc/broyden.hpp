#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

namespace conperc {

struct BroydenOptions {
  double tol = 1e-12;       // max-norm residual target
  int max_iter = 300;
  double fd_step = 1e-6;    // forward-difference step for the initial Jacobian
  double clamp_eps = 1e-12; // iterates stay in [clamp_eps, 1 - clamp_eps]
};

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double best_residual)
      : std::runtime_error(what), best_residual_(best_residual) {}
  double best_residual() const { return best_residual_; }

 private:
  double best_residual_;
};

using ResidualFn =
    std::function<std::vector<double>(const std::vector<double>&)>;

// Quasi-Newton root finder on the unit box. The Jacobian is initialized by
// forward finite differences and maintained by rank-1 updates; a simple
// backtracking step keeps the residual from growing, and the Jacobian is
// rebuilt once if progress stalls. Throws SolverError (carrying the best
// residual max-norm seen) when max_iter is exhausted.
std::vector<double> broyden_solve(const ResidualFn& residual,
                                  std::vector<double> x0,
                                  const BroydenOptions& opts = {});

}  // namespace conperc
