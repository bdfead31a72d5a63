#include "atvgarch/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "atvgarch/error.hpp"

namespace atvgarch {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::invalid_config: return "invalid-config";
    case ErrorCode::unsupported_order: return "unsupported-order";
    case ErrorCode::invalid_moments: return "invalid-moments";
    case ErrorCode::nonpositive_intercept: return "nonpositive-intercept";
    case ErrorCode::explosive_config: return "explosive-config";
    case ErrorCode::nonfinite_likelihood: return "nonfinite-likelihood";
    case ErrorCode::degenerate_series: return "degenerate-series";
    case ErrorCode::singular_matrix: return "singular-matrix";
    case ErrorCode::excessive_discards: return "excessive-discards";
    case ErrorCode::nonpositive_price: return "nonpositive-price";
    case ErrorCode::parse_error: return "parse-error";
    case ErrorCode::io_error: return "io-error";
  }
  return "unknown";
}

double ErrorDist::m4() const {
  if (kind == Kind::gaussian) return 3.0;
  if (dof <= 4.0) return std::numeric_limits<double>::infinity();
  return 3.0 * (dof - 2.0) / (dof - 4.0);
}

std::size_t ModelSpec::num_locations() const {
  return std::accumulate(k_orders.begin(), k_orders.end(), std::size_t{0});
}

std::size_t ModelSpec::dim() const { return 1 + p + q + 2 * num_transitions() + num_locations(); }

void ModelSpec::validate() const {
  if (p < 1) throw Error(ErrorCode::invalid_argument, "ARCH order p must be at least 1");
  for (std::size_t k : k_orders)
    if (k < 1) throw Error(ErrorCode::invalid_argument, "transition order K must be at least 1");
  if (error_dist.kind == ErrorDist::Kind::student_t && error_dist.dof <= 2.0)
    throw Error(ErrorCode::invalid_argument, "student-t degrees of freedom must exceed 2");
}

double ParamVector::beta_sum() const { return std::accumulate(betas.begin(), betas.end(), 0.0); }

double ParamVector::persistence() const {
  return std::accumulate(alphas.begin(), alphas.end(), 0.0) + beta_sum();
}

ModelSpec spec_of(const ParamVector& theta) {
  ModelSpec s;
  s.p = theta.alphas.size();
  s.q = theta.betas.size();
  for (const auto& tr : theta.transitions) s.k_orders.push_back(tr.c.size());
  return s;
}

Eigen::VectorXd to_vector(const ParamVector& theta, Coords coords) {
  const ModelSpec spec = spec_of(theta);
  Eigen::VectorXd v(spec.dim());
  Eigen::Index i = 0;
  v[i++] = theta.alpha0;
  for (double a : theta.alphas) v[i++] = a;
  for (double b : theta.betas) v[i++] = b;
  for (const auto& tr : theta.transitions) {
    v[i++] = coords == Coords::natural ? tr.gamma : eta_from_gamma(tr.gamma);
    for (double c : tr.c) v[i++] = c;
    v[i++] = tr.alpha0l;
  }
  return v;
}

ParamVector from_vector(const Eigen::VectorXd& v, const ModelSpec& spec, Coords coords) {
  if (static_cast<std::size_t>(v.size()) != spec.dim())
    throw Error(ErrorCode::invalid_argument, "parameter vector length does not match the model");
  ParamVector theta;
  Eigen::Index i = 0;
  theta.alpha0 = v[i++];
  for (std::size_t j = 0; j < spec.p; ++j) theta.alphas.push_back(v[i++]);
  for (std::size_t j = 0; j < spec.q; ++j) theta.betas.push_back(v[i++]);
  for (std::size_t k : spec.k_orders) {
    TransitionParams tr;
    const double s = v[i++];
    tr.gamma = coords == Coords::natural ? s : gamma_from_eta(s);
    for (std::size_t j = 0; j < k; ++j) tr.c.push_back(v[i++]);
    tr.alpha0l = v[i++];
    theta.transitions.push_back(std::move(tr));
  }
  return theta;
}

std::vector<std::string> parameter_names(const ModelSpec& spec, Coords coords) {
  std::vector<std::string> names{"alpha0"};
  for (std::size_t j = 1; j <= spec.p; ++j) names.push_back("alpha" + std::to_string(j));
  for (std::size_t j = 1; j <= spec.q; ++j) names.push_back("beta" + std::to_string(j));
  const std::size_t L = spec.num_transitions();
  for (std::size_t l = 1; l <= L; ++l) {
    const std::string ls = std::to_string(l);
    names.push_back((coords == Coords::natural ? "gamma" : "eta") + ls);
    const std::size_t K = spec.k_orders[l - 1];
    for (std::size_t k = 1; k <= K; ++k)
      names.push_back(K == 1 ? "c" + ls : "c" + ls + "_" + std::to_string(k));
    names.push_back("alpha0" + ls);
  }
  return names;
}

std::size_t gamma_index(const ModelSpec& spec, std::size_t l) {
  std::size_t idx = 1 + spec.p + spec.q;
  for (std::size_t j = 0; j < l; ++j) idx += 2 + spec.k_orders[j];
  return idx;
}

void validate(const ParamVector& theta) {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::invalid_argument, msg); };
  if (theta.alphas.empty()) fail("at least one ARCH coefficient is required");
  if (!(theta.alpha0 > 0.0)) fail("alpha0 must be positive");
  for (double a : theta.alphas)
    if (!(a >= 0.0)) fail("ARCH coefficients must be nonnegative");
  for (double b : theta.betas)
    if (!(b >= 0.0)) fail("GARCH coefficients must be nonnegative");
  if (!(theta.persistence() < 1.0))
    throw Error(ErrorCode::explosive_config, "sum of ARCH and GARCH coefficients must be below 1");
  double prev = -std::numeric_limits<double>::infinity();
  for (const auto& tr : theta.transitions) {
    if (!(tr.gamma > 0.0)) fail("transition slope gamma must be positive");
    if (tr.c.empty()) fail("transition needs at least one location parameter");
    for (double c : tr.c) {
      if (!(c >= 0.0 && c <= 1.0)) fail("location parameters must lie in [0, 1]");
      if (!(c > prev)) fail("location parameters must be strictly increasing");
      prev = c;
    }
    if (!std::isfinite(tr.alpha0l)) fail("transition weight must be finite");
  }
}

// ---------------------------------------------------------------------------

namespace {

constexpr double kExpClamp = 700.0;

double logistic_of(double z) {
  z = std::clamp(z, -kExpClamp, kExpClamp);
  return 1.0 / (1.0 + std::exp(-z));
}

}  // namespace

double logistic_g(double u, const TransitionParams& t) {
  double prod = 1.0;
  for (double c : t.c) prod *= (u - c);
  return logistic_of(t.gamma * prod);
}

TransitionDerivatives transition_derivatives(double u, const TransitionParams& t, int order) {
  if (t.c.size() != 1)
    throw Error(ErrorCode::unsupported_order,
                "closed-form transition derivatives need a single location parameter");
  if (order < 1 || order > 3)
    throw Error(ErrorCode::unsupported_order, "derivative order must be 1, 2 or 3");
  const double g = logistic_g(u, t);
  const double s = g * (1.0 - g);
  const double d = u - t.c[0];
  const double gm = t.gamma;
  TransitionDerivatives out;
  out.order = order;
  if (order == 1) {
    out.values = {d * s, -gm * s};
  } else if (order == 2) {
    const double w = 1.0 - 2.0 * g;
    out.values = {d * d * s * w, -gm * d * s * w - s, gm * gm * s * w};
  } else {
    const double w = 1.0 - 2.0 * g;
    const double v = 1.0 - 6.0 * g + 6.0 * g * g;
    out.values = {d * d * d * s * v, -gm * d * d * s * v - 2.0 * d * s * w,
                  gm * gm * d * s * v - 2.0 * gm * s * w, -gm * gm * gm * s * v};
  }
  return out;
}

double transition_sum(double u, const ParamVector& theta) {
  double g = 0.0;
  for (const auto& tr : theta.transitions) g += tr.alpha0l * logistic_g(u, tr);
  return g;
}

std::vector<double> intercept_path(const ParamVector& theta, std::size_t T) {
  std::vector<double> path(T);
  const double inv_T = 1.0 / static_cast<double>(T);
  for (std::size_t t = 0; t < T; ++t) {
    const double a = theta.alpha0 + transition_sum(static_cast<double>(t + 1) * inv_T, theta);
    if (!(a > 0.0))
      throw Error(ErrorCode::nonpositive_intercept,
                  "time-varying intercept is not positive at t = " + std::to_string(t + 1));
    path[t] = a;
  }
  return path;
}

double default_initial_variance(const ParamVector& theta, std::size_t T) {
  const double u = 1.0 / static_cast<double>(std::max<std::size_t>(T, 1));
  return (theta.alpha0 + transition_sum(u, theta)) / (1.0 - theta.persistence());
}

std::vector<double> variance_recursion(const ParamVector& theta, std::span<const double> x2,
                                       std::span<const double> h_init) {
  const std::size_t T = x2.size();
  const std::size_t p = theta.alphas.size();
  const std::size_t q = theta.betas.size();
  const std::size_t n0 = std::max<std::size_t>(q, 1);
  if (!h_init.empty() && h_init.size() != n0)
    throw Error(ErrorCode::invalid_argument, "h_init must hold one value per GARCH lag");
  const double h0 = h_init.empty() ? default_initial_variance(theta, T) : 0.0;

  std::vector<double> h(T + 1);
  const std::size_t n_init = std::min(n0, T + 1);
  for (std::size_t t = 0; t < n_init; ++t) h[t] = h_init.empty() ? h0 : h_init[t];
  if (!theta.transitions.empty()) {
    const double inv_T = 1.0 / static_cast<double>(T);
    for (std::size_t t = n_init; t <= T; ++t) {
      double v = theta.alpha0 + transition_sum(static_cast<double>(t + 1) * inv_T, theta);
      for (std::size_t i = 1; i <= p && i <= t; ++i) v += theta.alphas[i - 1] * x2[t - i];
      for (std::size_t j = 1; j <= q; ++j) v += theta.betas[j - 1] * h[t - j];
      h[t] = v;
    }
  } else {
    for (std::size_t t = n_init; t <= T; ++t) {
      double v = theta.alpha0;
      for (std::size_t i = 1; i <= p && i <= t; ++i) v += theta.alphas[i - 1] * x2[t - i];
      for (std::size_t j = 1; j <= q; ++j) v += theta.betas[j - 1] * h[t - j];
      h[t] = v;
    }
  }
  return h;
}

RepresentationCoeffs representation_coeffs(const ParamVector& theta, std::size_t horizon) {
  const double bsum = theta.beta_sum();
  if (!(bsum < 1.0))
    throw Error(ErrorCode::explosive_config, "sum of GARCH coefficients must be below 1");
  RepresentationCoeffs rc;
  rc.rho0 = bsum;
  rc.c0 = theta.alpha0 / (1.0 - bsum);
  const std::size_t q = theta.betas.size();
  const std::size_t p = theta.alphas.size();
  std::vector<double> psi(horizon + 1, 0.0);
  if (horizon + 1 > 0) psi[0] = 1.0;
  for (std::size_t k = 1; k <= horizon; ++k) {
    double v = 0.0;
    for (std::size_t j = 1; j <= q && j <= k; ++j) v += theta.betas[j - 1] * psi[k - j];
    psi[k] = v;
  }
  rc.d.assign(psi.begin(), psi.begin() + static_cast<std::ptrdiff_t>(horizon));
  rc.c.assign(horizon, 0.0);
  for (std::size_t i = 1; i <= horizon; ++i) {
    double v = 0.0;
    for (std::size_t j = 1; j <= p && j <= i; ++j) v += theta.alphas[j - 1] * psi[i - j];
    rc.c[i - 1] = v;
  }
  return rc;
}

std::vector<double> representation_variance(const ParamVector& theta,
                                            std::span<const double> x2) {
  const std::size_t T = x2.size();
  const RepresentationCoeffs rc = representation_coeffs(theta, T);
  std::vector<double> g(T);
  const double inv_T = 1.0 / static_cast<double>(T);
  for (std::size_t t = 0; t < T; ++t) g[t] = transition_sum(static_cast<double>(t + 1) * inv_T, theta);
  std::vector<double> h(T);
  for (std::size_t t = 0; t < T; ++t) {
    double v = rc.c0;
    for (std::size_t i = 1; i <= t + 1; ++i) v += rc.d[i - 1] * g[t + 1 - i];
    for (std::size_t i = 1; i <= t; ++i) v += rc.c[i - 1] * x2[t - i];
    h[t] = v;
  }
  return h;
}

// ---------------------------------------------------------------------------

MomentCheck fourth_moment_check(double alpha1, double beta1, double m2, double m4) {
  if (!(m2 > 0.0) || !(m4 >= m2 * m2))
    throw Error(ErrorCode::invalid_moments, "moments must satisfy m2 > 0 and m4 >= m2^2");
  MomentCheck mc;
  mc.margin = 1.0 - (beta1 * beta1 + 2.0 * alpha1 * beta1 * m2 + alpha1 * alpha1 * m4);
  mc.exists = mc.margin > 0.0;
  return mc;
}

MomentRegion moment_region_grid(double m2, double m4, std::size_t resolution) {
  if (resolution < 2) throw Error(ErrorCode::invalid_argument, "resolution must be at least 2");
  fourth_moment_check(0.0, 0.0, m2, m4);
  MomentRegion r;
  const double step = 1.0 / static_cast<double>(resolution - 1);
  for (std::size_t i = 0; i < resolution; ++i) {
    r.alpha_grid.push_back(static_cast<double>(i) * step);
    r.beta_grid.push_back(static_cast<double>(i) * step);
  }
  r.inside.resize(resolution * resolution);
  for (std::size_t i = 0; i < resolution; ++i)
    for (std::size_t j = 0; j < resolution; ++j)
      r.inside[i * resolution + j] = fourth_moment_check(r.alpha_grid[i], r.beta_grid[j], m2, m4).exists;

  // beta^2 + 2 m2 alpha beta + m4 alpha^2 - 1 = 0, positive root
  const double amax = 1.0 / std::sqrt(m4);
  for (std::size_t i = 0; i < resolution; ++i) {
    const double a = amax * static_cast<double>(i) * step;
    const double disc = std::max(0.0, 1.0 - a * a * (m4 - m2 * m2));
    const double b = i + 1 == resolution ? 0.0 : std::max(0.0, std::sqrt(disc) - a * m2);
    r.boundary_alpha.push_back(i + 1 == resolution ? amax : a);
    r.boundary_beta.push_back(b);
  }
  return r;
}

}  // namespace atvgarch
