#pragma once

#include <span>
#include <vector>

namespace atvgarch {

struct Moments {
  double mean = 0.0;
  double sd = 0.0;        // n - 1 denominator
  double skew = 0.0;      // m3 / m2^1.5
  double kurtosis = 0.0;  // m4 / m2^2, not excess
};

Moments sample_moments(std::span<const double> x);

/// Linear-interpolation quantile (Hyndman-Fan type 7) of sorted data.
double quantile_sorted(std::span<const double> sorted, double prob);

struct SummaryStats {
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;
  double median = 0.0;
  double min = 0.0;
  double max = 0.0;
  double skew = 0.0;
  double robust_skew = 0.0;      // Bowley
  double kurtosis = 0.0;         // excess unless excess_kurtosis is false
  double robust_kurtosis = 0.0;  // Moors, minus 1.233
  bool excess_kurtosis = true;
};

/// Throws nonpositive_price or invalid_argument (fewer than two prices).
std::vector<double> log_returns(std::span<const double> prices);

/// Needs n >= 8. Throws degenerate_series when Q3 == Q1.
SummaryStats summary_stats(std::span<const double> returns, bool excess_kurtosis = true);

}  // namespace atvgarch
