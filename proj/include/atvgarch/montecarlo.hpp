#pragma once
// Replication harness: simulate, fit from the truth, discard fits whose
// slope estimate sits at its bound and redraw until reps are collected.

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "atvgarch/estimator.hpp"
#include "atvgarch/model.hpp"

namespace atvgarch {

struct DgpSpec {
  std::string name = "custom";
  ParamVector theta_true;
  std::size_t T = 3000;
  std::size_t reps = 500;
  std::uint64_t seed = 1;
  std::size_t burn_in = 500;
  ErrorDist error_dist{};
};

/// Slope putting G(a) = 0.01 and G(b) = 0.99 for a single location at the
/// midpoint (a + b) / 2.
double design_gamma(double a, double b);

/// DGP1 (slow, gamma 12), DGP2 (moderate, 18), DGP3 (rapid, 46):
/// alpha0 = 0.05, alpha1 = 0.1, beta1 = 0.8, alpha01 = 0.15, c = 0.5.
/// Throws invalid_argument for other names.
DgpSpec dgp(const std::string& name, std::size_t T = 3000, std::size_t reps = 500,
            std::uint64_t seed = 1);
std::vector<std::string> dgp_names();

struct McOptions {
  FitOptions fit{};
  std::size_t threads = 1;
  std::size_t max_attempts_per_rep = 200;
  double max_discard_rate = 0.5;
};

struct McSummary {
  std::vector<std::string> names;  // reporting coordinates
  std::vector<double> truth;
  std::vector<double> mean;
  std::vector<double> sd;
  std::vector<double> mean_abs_error;
  double discard_rate = 0.0;  // discards / attempts
  std::size_t reps_used = 0;
  std::size_t attempts = 0;
  std::size_t discards = 0;
  std::size_t not_converged = 0;
  std::size_t stuck_at_start = 0;
  double runtime_seconds = 0.0;
};

struct McResult {
  McSummary summary;
  Eigen::MatrixXd raw;  // reps x dim, reporting coordinates
  std::vector<std::uint64_t> seeds;
  std::vector<bool> converged;
  std::vector<bool> stuck;  // gamma estimate within 1e-8 of its start
  std::vector<double> loglik;
};

/// Simulation seed of attempt `attempt` for replication `rep`.
std::uint64_t replication_seed(std::uint64_t master, std::size_t rep, std::size_t attempt);

/// Throws excessive_discards when the discard rate exceeds opts.max_discard_rate.
McResult run_mc(const DgpSpec& dgp, const McOptions& opts = {});

struct Standardized {
  Eigen::MatrixXd z;  // (x - mean) / sd per column
  std::vector<double> skew;
  std::vector<double> excess_kurtosis;
};

/// Needs at least 100 rows; throws degenerate_series on a constant column.
Standardized standardized_estimates(const Eigen::MatrixXd& raw, std::size_t min_rows = 100);

}  // namespace atvgarch
