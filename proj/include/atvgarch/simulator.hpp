#pragma once

#include <cstdint>
#include <vector>

#include "atvgarch/model.hpp"

namespace atvgarch {

struct SimConfig {
  ParamVector theta;
  ErrorDist error_dist{};
  std::size_t T = 1000;
  std::size_t burn_in = 500;
  std::uint64_t seed = 1;
};

/// A return series on the rescaled-time axis times[t-1] = t / T.
struct SeriesFrame {
  std::vector<double> x;
  std::vector<double> h_true;  // empty for observed data
  std::vector<double> times;

  std::size_t size() const { return x.size(); }
  std::vector<double> squared() const;

  /// Frame for observed data with the canonical t/T axis.
  static SeriesFrame from_returns(std::vector<double> x);
};

/// Simulated ATV-GARCH path. During burn-in the intercept is held at
/// alpha0 + g(0); the sample then runs over t/T in (0, 1].
/// Throws explosive_config when the persistence is >= 1.
SeriesFrame simulate(const SimConfig& cfg);

/// Stationary GARCH path with intercept frozen at alpha0 + g(u), driven by the
/// same innovation stream as simulate() under the same seed.
SeriesFrame simulate_stationary_at(const SimConfig& cfg, double u);

struct ProbeRow {
  std::size_t T = 0;
  // Mean over reps and window of |sigma^2_{t,T} - sigma~^2_t(u)|, which is
  // E(|X^2_{t,T} - X~^2_t(u)| | past) since both share eps_t^2.
  double deviation = 0.0;
  double mean_abs_deviation = 0.0;  // same, on realized squares
  double mean_max_deviation = 0.0;  // mean over reps of the window maximum
  // Mean over reps and window of |sigma^2_{t,T} - sigma~^2_t(t/T)|: the
  // stationary path is frozen at each observation's own rescaled time, so
  // only the O(1/T) part of the bound remains.
  double local_deviation = 0.0;
  std::size_t window = 0;           // observations with |t/T - u| < delta
};

struct ProbeOptions {
  double u = 0.5;
  double delta = 0.01;
  std::size_t reps = 100;
  std::size_t burn_in = 500;
  std::uint64_t seed = 1;
};

/// Coupled-path check of local stationarity around rescaled time u: for each
/// T, simulate the time-varying path and its stationary approximation at u on
/// common innovations and record the deviation of squared observations inside
/// the window |t/T - u| < delta.
std::vector<ProbeRow> local_stationarity_probe(const ParamVector& theta,
                                               const std::vector<std::size_t>& T_list,
                                               const ProbeOptions& opts);

}  // namespace atvgarch
