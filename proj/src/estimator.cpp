#include "atvgarch/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "atvgarch/error.hpp"
#include "atvgarch/rng.hpp"
#include "atvgarch/transform.hpp"

namespace atvgarch {

double checked_variance(const std::vector<double>& x) {
  if (x.size() < 2) throw Error(ErrorCode::degenerate_series, "series is too short");
  const double n = static_cast<double>(x.size());
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  const double var = ss / (n - 1.0);
  double peak = 0.0;
  for (double v : x) peak = std::max(peak, std::abs(v));
  // constant series leave only rounding noise in ss
  if (!(var > 1e-300) || !(var > 1e-24 * peak * peak) || !std::isfinite(var))
    throw Error(ErrorCode::degenerate_series, "series has zero variance");
  return var;
}

ParamVector auto_start(const SeriesFrame& series, const ModelSpec& spec) {
  spec.validate();
  const double var = checked_variance(series.x);
  ParamVector th;
  th.alpha0 = 0.1 * var * (1.0 - 0.9);
  th.alphas.assign(spec.p, 0.1 / static_cast<double>(spec.p));
  th.betas.assign(spec.q, 0.8 / static_cast<double>(spec.q));

  const std::size_t L = spec.num_transitions();
  if (L > 0) {
    const std::size_t n = series.size(), half = n / 2;
    double first = 0.0, second = 0.0;
    for (std::size_t t = 0; t < n; ++t) (t < half ? first : second) += series.x[t] * series.x[t];
    first /= static_cast<double>(half);
    second /= static_cast<double>(n - half);
    const double sign = second >= first ? 1.0 : -1.0;
    const std::size_t M = spec.num_locations();
    std::size_t j = 0;
    for (std::size_t l = 0; l < L; ++l) {
      TransitionParams tr;
      tr.gamma = gamma_from_eta(0.9);
      for (std::size_t k = 0; k < spec.k_orders[l]; ++k)
        tr.c.push_back(static_cast<double>(++j) / static_cast<double>(M + 1));
      tr.alpha0l = sign * 0.5 * th.alpha0 / static_cast<double>(L);
      th.transitions.push_back(std::move(tr));
    }
  }
  return th;
}

namespace {

struct Evaluator {
  const SeriesFrame& series;
  const LikelihoodConfig& cfg;
  const ParamTransform& tf;
  double scale;

  bool operator()(const Eigen::VectorXd& z, double& f, Eigen::VectorXd& g) const {
    if (!z.allFinite()) return false;
    const ParamVector th = tf.to_natural(z);
    auto vg = try_loglik_and_score(th, series, cfg, Coords::natural);
    if (!vg) return false;
    f = -scale * vg->value;
    g = -scale * (tf.jacobian(z).transpose() * vg->gradient);
    return std::isfinite(f) && g.allFinite();
  }
};

bool feasible(const ParamVector& th, const SeriesFrame& series, const LikelihoodConfig& cfg) {
  try {
    validate(th);
  } catch (const Error&) {
    return false;
  }
  return try_variance_filter(th, series, cfg, false).has_value();
}

}  // namespace

FitResult fit(const SeriesFrame& series, const ModelSpec& spec, const FitOptions& opts) {
  spec.validate();
  if (series.size() < opts.min_length)
    throw Error(ErrorCode::invalid_argument,
                "series length " + std::to_string(series.size()) + " is below " +
                    std::to_string(opts.min_length));
  checked_variance(series.x);

  ParamVector start = opts.start ? *opts.start : auto_start(series, spec);
  if (spec_of(start).dim() != spec.dim() || spec_of(start).k_orders != spec.k_orders)
    throw Error(ErrorCode::invalid_argument, "start value does not match the model");
  if (!feasible(start, series, opts.likelihood)) {
    start = auto_start(series, spec);
    if (!feasible(start, series, opts.likelihood))
      throw Error(ErrorCode::nonfinite_likelihood, "no feasible start value");
  }

  const ParamTransform tf(spec);
  const Evaluator eval{series, opts.likelihood, tf, static_cast<double>(series.size())};
  Eigen::VectorXd z0 = tf.to_unconstrained(start);
  {
    double f;
    Eigen::VectorXd g;
    if (!eval(z0, f, g)) {
      // clamping inside to_unconstrained can push a boundary start out of the domain
      z0 = tf.to_unconstrained(auto_start(series, spec));
    }
  }

  FitResult out;
  out.spec = spec;
  OptimizeResult best = minimize_bfgs(eval, z0, opts.optimizer);
  out.iterations = best.iterations;
  out.evaluations = best.evaluations;
  std::vector<double> trace = best.trace;

  Rng rng(derive_seed(opts.seed, 0x5eed, 0));
  for (std::size_t r = 0; r < opts.max_restarts && !best.converged; ++r) {
    Eigen::VectorXd z = best.z;
    double f;
    Eigen::VectorXd g;
    bool ok = false;
    for (int attempt = 0; attempt < 20 && !ok; ++attempt) {
      z = best.z;
      for (Eigen::Index i = 0; i < z.size(); ++i) z[i] += opts.restart_jitter * rng.normal();
      ok = eval(z, f, g);
    }
    if (!ok) continue;
    ++out.restarts;
    OptimizeResult cand = minimize_bfgs(eval, z, opts.optimizer);
    out.iterations += cand.iterations;
    out.evaluations += cand.evaluations;
    trace.insert(trace.end(), cand.trace.begin(), cand.trace.end());
    if (cand.f < best.f || (cand.converged && cand.f <= best.f + 1e-9)) best = std::move(cand);
  }

  // trace holds -T * loglik per iteration; report the running best average loglik
  double running = -std::numeric_limits<double>::infinity();
  for (double v : trace) {
    running = std::max(running, -v / eval.scale);
    out.trace.push_back(running);
  }

  out.converged = best.converged;
  out.theta_hat = tf.to_natural(best.z);
  out.loglik = quasi_loglik(out.theta_hat, series, opts.likelihood).loglik;
  out.persistence = out.theta_hat.persistence();
  for (const auto& tr : out.theta_hat.transitions)
    if (eta_from_gamma(tr.gamma) >= ParamTransform::kEtaMax - opts.eta_bound_tol)
      out.eta_at_bound = true;

  const Eigen::Index dim = static_cast<Eigen::Index>(spec.dim());
  if (opts.covariance) {
    Covariance cov = sandwich_covariance(out.theta_hat, series, opts.likelihood);
    out.cov_robust = cov.robust;
    out.cov_nonrobust = cov.nonrobust;
    out.kappa = cov.kappa;
    out.se_reliable = cov.reliable;
    out.se_robust = out.cov_robust.diagonal().cwiseMax(0.0).cwiseSqrt();
    out.se_nonrobust = out.cov_nonrobust.diagonal().cwiseMax(0.0).cwiseSqrt();
  } else {
    out.cov_robust = Eigen::MatrixXd::Zero(dim, dim);
    out.cov_nonrobust = Eigen::MatrixXd::Zero(dim, dim);
    out.se_robust = Eigen::VectorXd::Zero(dim);
    out.se_nonrobust = Eigen::VectorXd::Zero(dim);
    out.se_reliable = false;
  }
  return out;
}

Covariance sandwich_covariance(const ParamVector& theta_hat, const SeriesFrame& series,
                               const LikelihoodConfig& cfg) {
  const double T = static_cast<double>(series.size());
  const Eigen::MatrixXd S = per_observation_scores(theta_hat, series, cfg, Coords::reporting);
  const Eigen::MatrixXd A = S.transpose() * S / T;
  Eigen::MatrixXd B = -hessian(theta_hat, series, cfg, Coords::reporting);
  B = 0.5 * (B + B.transpose());

  Covariance out;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B);
  const Eigen::VectorXd ev = es.eigenvalues();
  const double top = ev.cwiseAbs().maxCoeff();
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] > 1e-12 * top)
      inv[i] = 1.0 / ev[i];
    else
      out.reliable = false;
  }
  const Eigen::MatrixXd V = es.eigenvectors();
  const Eigen::MatrixXd Binv = V * inv.asDiagonal() * V.transpose();

  const std::vector<double> h = truncated_variance(theta_hat, series, cfg);
  double m4 = 0.0;
  for (std::size_t t = 0; t < series.size(); ++t) {
    const double z2 = series.x[t] * series.x[t] / h[t];
    m4 += z2 * z2;
  }
  out.kappa = m4 / T;

  Eigen::MatrixXd R = Binv * A * Binv / T;
  Eigen::MatrixXd N = 0.5 * (out.kappa - 1.0) * Binv / T;
  out.robust = 0.5 * (R + R.transpose());
  out.nonrobust = 0.5 * (N + N.transpose());
  return out;
}

}  // namespace atvgarch
