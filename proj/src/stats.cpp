#include "atvgarch/stats.hpp"

#include <algorithm>
#include <cmath>

#include "atvgarch/error.hpp"

namespace atvgarch {

namespace {
constexpr double kMoorsNormal = 1.233;
}

Moments sample_moments(std::span<const double> x) {
  if (x.size() < 2) throw Error(ErrorCode::invalid_argument, "need at least two values");
  const double n = static_cast<double>(x.size());
  Moments m;
  for (double v : x) m.mean += v;
  m.mean /= n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double d = v - m.mean, d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m.sd = std::sqrt(m2 / (n - 1.0));
  m2 /= n;
  m3 /= n;
  m4 /= n;
  if (m2 > 0.0) {
    m.skew = m3 / std::pow(m2, 1.5);
    m.kurtosis = m4 / (m2 * m2);
  }
  return m;
}

double quantile_sorted(std::span<const double> sorted, double prob) {
  if (sorted.empty()) throw Error(ErrorCode::invalid_argument, "quantile of empty data");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * std::clamp(prob, 0.0, 1.0);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::vector<double> log_returns(std::span<const double> prices) {
  if (prices.size() < 2) throw Error(ErrorCode::invalid_argument, "need at least two prices");
  std::vector<double> r;
  r.reserve(prices.size() - 1);
  for (std::size_t i = 0; i < prices.size(); ++i) {
    if (!(prices[i] > 0.0))
      throw Error(ErrorCode::nonpositive_price,
                  "price at position " + std::to_string(i + 1) + " is not positive");
    if (i > 0) r.push_back(std::log(prices[i]) - std::log(prices[i - 1]));
  }
  return r;
}

SummaryStats summary_stats(std::span<const double> returns, bool excess_kurtosis) {
  if (returns.size() < 8)
    throw Error(ErrorCode::invalid_argument, "summary statistics need at least 8 observations");
  std::vector<double> s(returns.begin(), returns.end());
  std::sort(s.begin(), s.end());
  const Moments m = sample_moments(returns);

  SummaryStats out;
  out.n = s.size();
  out.mean = m.mean;
  out.sd = m.sd;
  out.min = s.front();
  out.max = s.back();
  out.median = quantile_sorted(s, 0.5);
  out.skew = m.skew;
  out.excess_kurtosis = excess_kurtosis;
  out.kurtosis = excess_kurtosis ? m.kurtosis - 3.0 : m.kurtosis;

  const double q1 = quantile_sorted(s, 0.25), q3 = quantile_sorted(s, 0.75);
  if (!(q3 > q1)) throw Error(ErrorCode::degenerate_series, "interquartile range is zero");
  out.robust_skew = (q3 + q1 - 2.0 * out.median) / (q3 - q1);

  double e[8];
  for (int i = 1; i <= 7; ++i) e[i] = quantile_sorted(s, i / 8.0);
  out.robust_kurtosis = ((e[7] - e[5]) + (e[3] - e[1])) / (e[6] - e[2]) - kMoorsNormal;
  return out;
}

}  // namespace atvgarch
