#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "atvgarch/likelihood.hpp"
#include "atvgarch/model.hpp"
#include "atvgarch/optimizer.hpp"
#include "atvgarch/simulator.hpp"

namespace atvgarch {

struct FitOptions {
  std::optional<ParamVector> start;  // nullopt: auto_start()
  LikelihoodConfig likelihood{};
  OptimizerOptions optimizer{};
  std::size_t max_restarts = 3;
  double restart_jitter = 0.25;  // sd of the z perturbation
  std::uint64_t seed = 1;
  bool covariance = true;
  // eta counts as at its bound once it is this close to kEtaMax
  double eta_bound_tol = 1e-4;
  std::size_t min_length = 300;
};

struct Covariance {
  Eigen::MatrixXd robust;     // B^-1 A B^-1 / T
  Eigen::MatrixXd nonrobust;  // (kappa - 1) / 2 * B^-1 / T
  double kappa = 3.0;         // sample fourth moment of x / sqrt(h)
  bool reliable = true;       // false when B had to be pseudo-inverted
};

struct FitResult {
  ModelSpec spec;
  ParamVector theta_hat;
  double loglik = 0.0;  // average quasi log-likelihood at theta_hat
  bool converged = false;
  bool eta_at_bound = false;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  std::size_t restarts = 0;
  double persistence = 0.0;
  // covariance blocks are in reporting coordinates (eta instead of gamma)
  Eigen::MatrixXd cov_robust;
  Eigen::MatrixXd cov_nonrobust;
  Eigen::VectorXd se_robust;
  Eigen::VectorXd se_nonrobust;
  bool se_reliable = true;
  double kappa = 3.0;
  std::vector<double> trace;  // best average loglik per iteration, nondecreasing

  Eigen::VectorXd estimates(Coords coords = Coords::reporting) const {
    return to_vector(theta_hat, coords);
  }
};

/// Sample variance of x; throws degenerate_series when it is zero.
double checked_variance(const std::vector<double>& x);

ParamVector auto_start(const SeriesFrame& series, const ModelSpec& spec);

FitResult fit(const SeriesFrame& series, const ModelSpec& spec, const FitOptions& opts = {});

Covariance sandwich_covariance(const ParamVector& theta_hat, const SeriesFrame& series,
                               const LikelihoodConfig& cfg = {});

}  // namespace atvgarch
