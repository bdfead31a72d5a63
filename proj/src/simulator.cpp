#include "atvgarch/simulator.hpp"

#include <algorithm>
#include <cmath>

#include "atvgarch/error.hpp"
#include "atvgarch/rng.hpp"

namespace atvgarch {

std::vector<double> SeriesFrame::squared() const {
  std::vector<double> x2(x.size());
  std::transform(x.begin(), x.end(), x2.begin(), [](double v) { return v * v; });
  return x2;
}

SeriesFrame SeriesFrame::from_returns(std::vector<double> x) {
  SeriesFrame f;
  f.times.resize(x.size());
  const double inv_T = 1.0 / static_cast<double>(x.size());
  for (std::size_t t = 0; t < x.size(); ++t) f.times[t] = static_cast<double>(t + 1) * inv_T;
  f.x = std::move(x);
  return f;
}

namespace {

// Shared driver: burn_intercept applies during burn-in, sample_intercept[t]
// at sample index t.
SeriesFrame run_path(const SimConfig& cfg, double burn_intercept,
                     const std::vector<double>& sample_intercept) {
  const ParamVector& th = cfg.theta;
  const std::size_t p = th.alphas.size();
  const std::size_t q = th.betas.size();
  const std::size_t lags = std::max(p, q);
  const double persistence = th.persistence();
  const std::size_t n = cfg.burn_in + cfg.T;

  const double h0 = burn_intercept / (1.0 - persistence);
  std::vector<double> h(lags + n, h0);
  std::vector<double> x2(lags + n, h0);
  std::vector<double> x(n);

  Rng rng(cfg.seed);
  for (std::size_t s = 0; s < n; ++s) {
    const std::size_t i = lags + s;
    double v = s < cfg.burn_in ? burn_intercept : sample_intercept[s - cfg.burn_in];
    for (std::size_t a = 1; a <= p; ++a) v += th.alphas[a - 1] * x2[i - a];
    for (std::size_t b = 1; b <= q; ++b) v += th.betas[b - 1] * h[i - b];
    h[i] = v;
    const double eps = rng.innovation(cfg.error_dist);
    x[s] = std::sqrt(v) * eps;
    x2[i] = x[s] * x[s];
  }

  SeriesFrame frame;
  frame.x.assign(x.begin() + static_cast<std::ptrdiff_t>(cfg.burn_in), x.end());
  frame.h_true.assign(h.begin() + static_cast<std::ptrdiff_t>(lags + cfg.burn_in), h.end());
  frame.times.resize(cfg.T);
  const double inv_T = 1.0 / static_cast<double>(cfg.T);
  for (std::size_t t = 0; t < cfg.T; ++t) frame.times[t] = static_cast<double>(t + 1) * inv_T;
  return frame;
}

void check_config(const SimConfig& cfg) {
  if (cfg.T < 1) throw Error(ErrorCode::invalid_argument, "sample length must be at least 1");
  validate(cfg.theta);
  if (cfg.error_dist.kind == ErrorDist::Kind::student_t && !(cfg.error_dist.dof > 2.0))
    throw Error(ErrorCode::invalid_argument, "student-t errors need more than 2 degrees of freedom");
}

}  // namespace

SeriesFrame simulate(const SimConfig& cfg) {
  check_config(cfg);
  const double a0 = cfg.theta.alpha0 + transition_sum(0.0, cfg.theta);
  if (!(a0 > 0.0))
    throw Error(ErrorCode::nonpositive_intercept, "intercept is not positive at u = 0");
  return run_path(cfg, a0, intercept_path(cfg.theta, cfg.T));
}

SeriesFrame simulate_stationary_at(const SimConfig& cfg, double u) {
  check_config(cfg);
  if (!(u >= 0.0 && u <= 1.0)) throw Error(ErrorCode::invalid_argument, "u must lie in [0, 1]");
  const double a = cfg.theta.alpha0 + transition_sum(u, cfg.theta);
  if (!(a > 0.0)) throw Error(ErrorCode::nonpositive_intercept, "intercept is not positive at u");
  return run_path(cfg, a, std::vector<double>(cfg.T, a));
}

namespace {

// sigma~^2_t(u) for the stationary process with intercept a, rebuilt from the
// innovations of the last `span` steps; older history is forgotten at the
// contraction rate of the recursion.
double frozen_variance(const ParamVector& th, double a, const std::vector<double>& eps,
                       std::size_t t, std::size_t span) {
  const std::size_t p = th.alphas.size(), q = th.betas.size(), lags = std::max(p, q);
  const std::size_t start = t > span ? t - span : 0;
  const double h0 = a / (1.0 - th.persistence());
  std::vector<double> h(lags, h0), x2(lags, h0);
  for (std::size_t s = start; s <= t; ++s) {
    double v = a;
    const std::size_t n = h.size();
    for (std::size_t i = 1; i <= p; ++i) v += th.alphas[i - 1] * x2[n - i];
    for (std::size_t j = 1; j <= q; ++j) v += th.betas[j - 1] * h[n - j];
    h.push_back(v);
    x2.push_back(v * eps[s] * eps[s]);
  }
  return h.back();
}

}  // namespace

std::vector<ProbeRow> local_stationarity_probe(const ParamVector& theta,
                                               const std::vector<std::size_t>& T_list,
                                               const ProbeOptions& opts) {
  std::vector<ProbeRow> rows;
  for (std::size_t T : T_list) {
    ProbeRow row;
    row.T = T;
    double sum_max = 0.0;
    double sum_abs = 0.0;
    double sum_cond = 0.0;
    double sum_local = 0.0;
    std::size_t n_abs = 0;
    for (std::size_t r = 0; r < opts.reps; ++r) {
      SimConfig cfg{theta, ErrorDist::gaussian(), T, opts.burn_in, derive_seed(opts.seed, r, T)};
      const SeriesFrame tv = simulate(cfg);
      const SeriesFrame st = simulate_stationary_at(cfg, opts.u);
      std::vector<double> eps(T);
      for (std::size_t t = 0; t < T; ++t) eps[t] = tv.x[t] / std::sqrt(tv.h_true[t]);
      double mx = 0.0;
      std::size_t w = 0;
      for (std::size_t t = 0; t < T; ++t) {
        if (std::abs(tv.times[t] - opts.u) >= opts.delta) continue;
        const double dev = std::abs(tv.x[t] * tv.x[t] - st.x[t] * st.x[t]);
        mx = std::max(mx, dev);
        sum_abs += dev;
        sum_cond += std::abs(tv.h_true[t] - st.h_true[t]);
        const double a = theta.alpha0 + transition_sum(tv.times[t], theta);
        sum_local += std::abs(tv.h_true[t] - frozen_variance(theta, a, eps, t, 600));
        ++w;
      }
      n_abs += w;
      row.window = w;
      sum_max += mx;
    }
    row.mean_max_deviation = sum_max / static_cast<double>(opts.reps);
    row.mean_abs_deviation = n_abs ? sum_abs / static_cast<double>(n_abs) : 0.0;
    row.deviation = n_abs ? sum_cond / static_cast<double>(n_abs) : 0.0;
    row.local_deviation = n_abs ? sum_local / static_cast<double>(n_abs) : 0.0;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace atvgarch
