#pragma once
// Unconstrained BFGS minimizer with a strong-Wolfe line search. The objective
// may report a point as infeasible, which the line search treats as +inf.

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

namespace atvgarch {

/// Returns false when z is outside the objective's domain.
using Objective = std::function<bool(const Eigen::VectorXd& z, double& f, Eigen::VectorXd& g)>;

struct OptimizerOptions {
  std::size_t max_iterations = 500;
  double gtol = 1e-6;   // on max |g_i|
  double xtol = 1e-10;  // on max |dz_i| of an accepted step
  double ftol = 1e-14;  // relative objective change
  double max_step = 1.0;  // cap on max |dz_i| of the first trial step
};

struct OptimizeResult {
  Eigen::VectorXd z;
  double f = 0.0;
  Eigen::VectorXd g;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  bool converged = false;
  std::vector<double> trace;  // best objective after each iteration
};

/// Throws invalid_argument if z0 is infeasible.
OptimizeResult minimize_bfgs(const Objective& objective, const Eigen::VectorXd& z0,
                             const OptimizerOptions& opts = {});

}  // namespace atvgarch
