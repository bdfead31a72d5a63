#include "atvgarch/likelihood.hpp"

#include <algorithm>
#include <cmath>

#include "atvgarch/error.hpp"
#include "atvgarch/kernels.hpp"

namespace atvgarch {

namespace {

std::span<double> col_span(Eigen::MatrixXd& m, Eigen::Index j) {
  return {m.col(j).data(), static_cast<std::size_t>(m.rows())};
}

// dG/dgamma and dG/dc_k at u; closed form for K = 1, central differences
// otherwise.
void transition_gradient(double u, const TransitionParams& tr, std::span<double> out) {
  if (tr.c.size() == 1) {
    const TransitionDerivatives d = transition_derivatives(u, tr, 1);
    out[0] = d.values[0];
    out[1] = d.values[1];
    return;
  }
  TransitionParams w = tr;
  const double hg = 1e-6 * std::max(1.0, std::abs(tr.gamma));
  w.gamma = tr.gamma + hg;
  const double gp = logistic_g(u, w);
  w.gamma = tr.gamma - hg;
  out[0] = (gp - logistic_g(u, w)) / (2.0 * hg);
  w.gamma = tr.gamma;
  for (std::size_t k = 0; k < tr.c.size(); ++k) {
    const double hc = 1e-6 * std::max(1.0, std::abs(tr.c[k]));
    w.c[k] = tr.c[k] + hc;
    const double cp = logistic_g(u, w);
    w.c[k] = tr.c[k] - hc;
    out[1 + k] = (cp - logistic_g(u, w)) / (2.0 * hc);
    w.c[k] = tr.c[k];
  }
}

double gamma_jacobian(double gamma) { return (1.0 + gamma) * (1.0 + gamma); }

void to_coords(const ParamVector& theta, const ModelSpec& spec, Coords coords,
               Eigen::Ref<Eigen::MatrixXd> m) {
  if (coords == Coords::natural) return;
  for (std::size_t l = 0; l < spec.num_transitions(); ++l)
    m.col(static_cast<Eigen::Index>(gamma_index(spec, l))) *= gamma_jacobian(theta.transitions[l].gamma);
}

void check_length(const ParamVector& theta, const SeriesFrame& series) {
  const std::size_t lags = std::max(theta.alphas.size(), theta.betas.size());
  if (series.size() < std::max<std::size_t>(10 * lags, 1))
    throw Error(ErrorCode::invalid_argument, "series too short for the model orders");
  if (series.times.size() != series.size())
    throw Error(ErrorCode::invalid_argument, "series time axis length mismatch");
}

}  // namespace

std::optional<VarianceFilter> try_variance_filter(const ParamVector& theta,
                                                  const SeriesFrame& series,
                                                  const LikelihoodConfig& cfg, bool derivatives) {
  const std::size_t T = series.size();
  const std::size_t p = theta.alphas.size();
  const std::size_t q = theta.betas.size();
  const std::size_t L = theta.transitions.size();
  const std::size_t m = std::min(cfg.truncation_lag, T);
  const double bsum = theta.beta_sum();
  if (!(bsum < 1.0) || !(theta.alpha0 > 0.0)) return std::nullopt;
  for (const auto& tr : theta.transitions)
    if (!(tr.gamma > 0.0) || !std::isfinite(tr.alpha0l)) return std::nullopt;

  VarianceFilter f;
  f.coeffs = representation_coeffs(theta, m);
  const std::vector<double>& d = f.coeffs.d;
  const std::vector<double>& c = f.coeffs.c;
  const double c0 = f.coeffs.c0;

  std::vector<double> x2(T);
  for (std::size_t t = 0; t < T; ++t) x2[t] = series.x[t] * series.x[t];

  // Transition values G_l(t/T) and the combined g.
  Eigen::MatrixXd G(T, static_cast<Eigen::Index>(L));
  std::vector<double> g(T, 0.0);
  f.intercept.assign(T, theta.alpha0);
  for (std::size_t l = 0; l < L; ++l) {
    const TransitionParams& tr = theta.transitions[l];
    for (std::size_t t = 0; t < T; ++t) {
      const double v = logistic_g(series.times[t], tr);
      G(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(l)) = v;
      g[t] += tr.alpha0l * v;
    }
  }
  for (std::size_t t = 0; t < T; ++t) {
    f.intercept[t] += g[t];
    if (!(f.intercept[t] > 0.0)) return std::nullopt;
  }

  std::vector<double> buf(T);
  f.h.assign(T, c0);
  kernels::lagged_conv(c, x2, 1, buf);
  for (std::size_t t = 0; t < T; ++t) f.h[t] += buf[t];
  if (L > 0) {
    kernels::lagged_conv(d, g, 0, buf);
    for (std::size_t t = 0; t < T; ++t) f.h[t] += buf[t];
  }
  for (double v : f.h)
    if (!(v > 0.0) || !std::isfinite(v)) return std::nullopt;
  if (!derivatives) return f;

  const ModelSpec spec = spec_of(theta);
  f.dh.resize(static_cast<Eigen::Index>(T), static_cast<Eigen::Index>(spec.dim()));

  // psi_0..psi_m: d_i = psi_{i-1}; psi_m is needed for c_m.
  std::vector<double> psi(m + 1, 0.0);
  psi[0] = 1.0;
  std::copy(d.begin(), d.end(), psi.begin());
  if (m > 0) {
    double v = 0.0;
    for (std::size_t j = 1; j <= q && j <= m; ++j) v += theta.betas[j - 1] * psi[m - j];
    psi[m] = v;
  }

  const double inv1mb = 1.0 / (1.0 - bsum);
  f.dh.col(0).setConstant(inv1mb);

  std::vector<double> coef(m);
  for (std::size_t j = 1; j <= p; ++j) {
    for (std::size_t k = 0; k < m; ++k) coef[k] = k + 1 >= j ? psi[k + 1 - j] : 0.0;
    kernels::lagged_conv(coef, x2, 1, col_span(f.dh, static_cast<Eigen::Index>(j)));
  }

  std::vector<double> phi(m + 1);
  for (std::size_t j = 1; j <= q; ++j) {
    // phi_k = d psi_k / d beta_j
    phi[0] = 0.0;
    for (std::size_t k = 1; k <= m; ++k) {
      double v = k >= j ? psi[k - j] : 0.0;
      for (std::size_t i = 1; i <= q && i <= k; ++i) v += theta.betas[i - 1] * phi[k - i];
      phi[k] = v;
    }
    const Eigen::Index col = static_cast<Eigen::Index>(p + j);
    auto out = col_span(f.dh, col);
    for (std::size_t k = 0; k < m; ++k) {
      double v = 0.0;
      for (std::size_t i = 1; i <= p && i <= k + 1; ++i) v += theta.alphas[i - 1] * phi[k + 1 - i];
      coef[k] = v;
    }
    kernels::lagged_conv(coef, x2, 1, out);
    const double dc0 = theta.alpha0 * inv1mb * inv1mb;
    if (L > 0) {
      kernels::lagged_conv(std::span<const double>(phi.data(), m), g, 0, buf);
      for (std::size_t t = 0; t < T; ++t) out[t] += dc0 + buf[t];
    } else {
      for (std::size_t t = 0; t < T; ++t) out[t] += dc0;
    }
  }

  std::vector<double> dg(T);
  std::vector<double> grad;
  for (std::size_t l = 0; l < L; ++l) {
    const TransitionParams& tr = theta.transitions[l];
    const std::size_t K = tr.c.size();
    const std::size_t base = gamma_index(spec, l);
    Eigen::MatrixXd dG(static_cast<Eigen::Index>(T), static_cast<Eigen::Index>(K + 1));
    grad.resize(K + 1);
    for (std::size_t t = 0; t < T; ++t) {
      transition_gradient(series.times[t], tr, grad);
      for (std::size_t k = 0; k <= K; ++k)
        dG(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(k)) = tr.alpha0l * grad[k];
    }
    for (std::size_t k = 0; k <= K; ++k) {
      kernels::lagged_conv(d, std::span<const double>(dG.col(static_cast<Eigen::Index>(k)).data(), T), 0,
                           col_span(f.dh, static_cast<Eigen::Index>(base + k)));
    }
    kernels::lagged_conv(d, std::span<const double>(G.col(static_cast<Eigen::Index>(l)).data(), T), 0,
                         col_span(f.dh, static_cast<Eigen::Index>(base + K + 1)));
  }
  return f;
}

VarianceFilter variance_filter(const ParamVector& theta, const SeriesFrame& series,
                               const LikelihoodConfig& cfg, bool derivatives) {
  check_length(theta, series);
  auto f = try_variance_filter(theta, series, cfg, derivatives);
  if (!f)
    throw Error(ErrorCode::nonfinite_likelihood,
                "parameters imply a nonpositive intercept or conditional variance");
  return std::move(*f);
}

std::vector<double> truncated_variance(const ParamVector& theta, const SeriesFrame& series,
                                       const LikelihoodConfig& cfg) {
  return variance_filter(theta, series, cfg, false).h;
}

namespace {

// w_t such that s_t = w_t * dh_t.
void score_weights(const SeriesFrame& series, const std::vector<double>& h, std::vector<double>& w) {
  w.resize(h.size());
  for (std::size_t t = 0; t < h.size(); ++t) {
    const double r = series.x[t] * series.x[t] / h[t];
    w[t] = -0.5 * (1.0 - r) / h[t];
  }
}

double average_loglik(const SeriesFrame& series, const std::vector<double>& h,
                      std::vector<double>* per_obs) {
  double sum = 0.0;
  if (per_obs) per_obs->resize(h.size());
  for (std::size_t t = 0; t < h.size(); ++t) {
    const double l = -0.5 * (std::log(h[t]) + series.x[t] * series.x[t] / h[t]);
    if (per_obs) (*per_obs)[t] = l;
    sum += l;
  }
  return sum / static_cast<double>(h.size());
}

Eigen::VectorXd analytic_gradient(const ParamVector& theta, const SeriesFrame& series,
                                  const VarianceFilter& f, Coords coords) {
  std::vector<double> w;
  score_weights(series, f.h, w);
  const Eigen::Index dim = f.dh.cols();
  Eigen::VectorXd s(dim);
  const double inv_T = 1.0 / static_cast<double>(series.size());
  for (Eigen::Index j = 0; j < dim; ++j) {
    s[j] = kernels::dot(w, std::span<const double>(f.dh.col(j).data(), w.size())) * inv_T;
  }
  Eigen::MatrixXd sm = s.transpose();
  to_coords(theta, spec_of(theta), coords, sm);
  return sm.transpose();
}

Eigen::VectorXd fd_gradient(const ParamVector& theta, const SeriesFrame& series,
                            const LikelihoodConfig& cfg, Coords coords) {
  const ModelSpec spec = spec_of(theta);
  const Eigen::VectorXd v = to_vector(theta, coords);
  Eigen::VectorXd s(v.size());
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    const double step = cfg.fd_step * std::max(1.0, std::abs(v[j]));
    Eigen::VectorXd vp = v, vm = v;
    vp[j] += step;
    vm[j] -= step;
    const double fp = quasi_loglik(from_vector(vp, spec, coords), series, cfg).loglik;
    const double fm = quasi_loglik(from_vector(vm, spec, coords), series, cfg).loglik;
    s[j] = (fp - fm) / (2.0 * step);
  }
  return s;
}

}  // namespace

LikelihoodEval quasi_loglik(const ParamVector& theta, const SeriesFrame& series,
                            const LikelihoodConfig& cfg, bool with_score, Coords coords) {
  const bool analytic = with_score && cfg.use_analytic_score;
  VarianceFilter f = variance_filter(theta, series, cfg, analytic);
  LikelihoodEval ev;
  ev.loglik = average_loglik(series, f.h, &ev.per_obs);
  if (!std::isfinite(ev.loglik))
    throw Error(ErrorCode::nonfinite_likelihood, "log-likelihood is not finite");
  if (with_score)
    ev.score = analytic ? analytic_gradient(theta, series, f, coords) : fd_gradient(theta, series, cfg, coords);
  ev.h = std::move(f.h);
  return ev;
}

std::optional<ValueAndGradient> try_loglik_and_score(const ParamVector& theta,
                                                     const SeriesFrame& series,
                                                     const LikelihoodConfig& cfg, Coords coords) {
  auto f = try_variance_filter(theta, series, cfg, true);
  if (!f) return std::nullopt;
  ValueAndGradient out;
  out.value = average_loglik(series, f->h, nullptr);
  if (!std::isfinite(out.value)) return std::nullopt;
  out.gradient = analytic_gradient(theta, series, *f, coords);
  if (!out.gradient.allFinite()) return std::nullopt;
  return out;
}

Eigen::VectorXd score(const ParamVector& theta, const SeriesFrame& series,
                      const LikelihoodConfig& cfg, Coords coords) {
  return *quasi_loglik(theta, series, cfg, true, coords).score;
}

Eigen::MatrixXd per_observation_scores(const ParamVector& theta, const SeriesFrame& series,
                                       const LikelihoodConfig& cfg, Coords coords) {
  VarianceFilter f = variance_filter(theta, series, cfg, true);
  std::vector<double> w;
  score_weights(series, f.h, w);
  Eigen::Map<const Eigen::VectorXd> wv(w.data(), static_cast<Eigen::Index>(w.size()));
  Eigen::MatrixXd s = f.dh.array().colwise() * wv.array();
  to_coords(theta, spec_of(theta), coords, s);
  return s;
}

Eigen::MatrixXd hessian(const ParamVector& theta, const SeriesFrame& series,
                        const LikelihoodConfig& cfg, Coords coords, bool raw) {
  const ModelSpec spec = spec_of(theta);
  const Eigen::VectorXd v = to_vector(theta, coords);
  const Eigen::Index n = v.size();
  LikelihoodConfig sc = cfg;
  sc.use_analytic_score = true;
  Eigen::MatrixXd H(n, n);
  auto central = [&](Eigen::Index j, double step) {
    Eigen::VectorXd vp = v, vm = v;
    vp[j] += step;
    vm[j] -= step;
    const Eigen::VectorXd sp = score(from_vector(vp, spec, coords), series, sc, coords);
    const Eigen::VectorXd sm = score(from_vector(vm, spec, coords), series, sc, coords);
    return Eigen::VectorXd((sp - sm) / (2.0 * step));
  };
  for (Eigen::Index j = 0; j < n; ++j) {
    // Richardson combination of steps h and h/2 cancels the h^2 error term
    const double step = cfg.fd_step * std::max(1.0, std::abs(v[j]));
    H.col(j) = (4.0 * central(j, 0.5 * step) - central(j, step)) / 3.0;
  }
  if (raw) return H;
  return 0.5 * (H + H.transpose());
}

}  // namespace atvgarch
