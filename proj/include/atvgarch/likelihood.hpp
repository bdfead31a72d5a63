#pragma once

// Gaussian quasi log-likelihood built on the truncated representation
//   h̄_t = c0 + sum_{i<=min(t,lag)} d_i g_{t-i+1} + sum_{i<=min(t-1,lag)} c_i X^2_{t-i}
// together with its analytic gradient and a finite-difference Hessian.

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <vector>

#include "atvgarch/model.hpp"
#include "atvgarch/simulator.hpp"

namespace atvgarch {

struct LikelihoodConfig {
  std::size_t truncation_lag = 200;
  bool use_analytic_score = true;
  double fd_step = 1e-5;  // relative step, scaled by max(1, |theta_j|)
};

struct LikelihoodEval {
  double loglik = 0.0;          // (1/T) sum_t l_t
  std::vector<double> per_obs;  // l_t = -(log h̄_t + X_t^2 / h̄_t) / 2
  std::vector<double> h;
  std::optional<Eigen::VectorXd> score;
};

/// h̄ together with dh̄/dtheta (T x dim, natural coordinates) when requested.
struct VarianceFilter {
  std::vector<double> h;
  std::vector<double> intercept;  // alpha0 + g(t/T)
  Eigen::MatrixXd dh;             // empty unless derivatives were requested
  RepresentationCoeffs coeffs;
};

/// Non-throwing core: returns nullopt when theta is infeasible for this
/// series (nonpositive intercept or variance, non-finite values).
std::optional<VarianceFilter> try_variance_filter(const ParamVector& theta,
                                                  const SeriesFrame& series,
                                                  const LikelihoodConfig& cfg, bool derivatives);

VarianceFilter variance_filter(const ParamVector& theta, const SeriesFrame& series,
                               const LikelihoodConfig& cfg, bool derivatives);

std::vector<double> truncated_variance(const ParamVector& theta, const SeriesFrame& series,
                                       const LikelihoodConfig& cfg = {});

/// Average log-likelihood; the gradient is attached when with_score is set.
/// Throws nonfinite_likelihood for infeasible theta.
LikelihoodEval quasi_loglik(const ParamVector& theta, const SeriesFrame& series,
                            const LikelihoodConfig& cfg = {}, bool with_score = false,
                            Coords coords = Coords::natural);

/// Value and gradient of the average log-likelihood, nullopt if infeasible.
struct ValueAndGradient {
  double value = 0.0;
  Eigen::VectorXd gradient;
};
std::optional<ValueAndGradient> try_loglik_and_score(const ParamVector& theta,
                                                     const SeriesFrame& series,
                                                     const LikelihoodConfig& cfg,
                                                     Coords coords = Coords::natural);

/// Gradient of the average log-likelihood (analytic or central differences
/// per cfg.use_analytic_score).
Eigen::VectorXd score(const ParamVector& theta, const SeriesFrame& series,
                      const LikelihoodConfig& cfg = {}, Coords coords = Coords::natural);

/// Per-observation scores s_t (T x dim).
Eigen::MatrixXd per_observation_scores(const ParamVector& theta, const SeriesFrame& series,
                                       const LikelihoodConfig& cfg = {},
                                       Coords coords = Coords::natural);

/// Hessian of the average log-likelihood by Richardson-extrapolated central
/// differences of the analytic score (steps fd_step and fd_step / 2);
/// symmetrized as (H + H^T) / 2 unless raw is set.
Eigen::MatrixXd hessian(const ParamVector& theta, const SeriesFrame& series,
                        const LikelihoodConfig& cfg = {}, Coords coords = Coords::natural,
                        bool raw = false);

}  // namespace atvgarch
