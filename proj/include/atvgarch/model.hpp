#pragma once

// Core ATV-GARCH(p,q) model: a GARCH volatility equation whose intercept
//   alpha0(u) = alpha0 + sum_l alpha0l * G(u; gamma_l, c_l),   u = t/T,
// moves deterministically through logistic transitions G.

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace atvgarch {

struct ErrorDist {
  enum class Kind { gaussian, student_t };
  Kind kind = Kind::gaussian;
  double dof = 0.0;  // student_t only, must exceed 4 for finite kurtosis checks

  static ErrorDist gaussian() { return {}; }
  static ErrorDist student_t(double nu) { return {Kind::student_t, nu}; }

  /// E(eps^2) and E(eps^4) of the standardized (unit variance) error.
  double m2() const { return 1.0; }
  double m4() const;
};

struct ModelSpec {
  std::size_t p = 1;
  std::size_t q = 1;
  std::vector<std::size_t> k_orders;  // one entry per transition, L = size()
  ErrorDist error_dist{};

  std::size_t num_transitions() const { return k_orders.size(); }
  std::size_t num_locations() const;
  std::size_t dim() const;

  /// Throws invalid_argument unless p >= 1 and every K_l >= 1.
  void validate() const;

  static ModelSpec garch(std::size_t p = 1, std::size_t q = 1) { return {p, q, {}, {}}; }
  static ModelSpec atv(std::size_t p, std::size_t q, std::vector<std::size_t> k) {
    return {p, q, std::move(k), {}};
  }
};

struct TransitionParams {
  double gamma = 1.0;
  std::vector<double> c;
  double alpha0l = 0.0;
};

/// Parameter layout used by every flattened vector in the library:
///   [alpha0, alpha_1..alpha_p, beta_1..beta_q,
///    for each transition l: gamma_l (or eta_l), c_l1..c_lK, alpha0l]
struct ParamVector {
  double alpha0 = 0.0;
  std::vector<double> alphas;
  std::vector<double> betas;
  std::vector<TransitionParams> transitions;

  double persistence() const;
  double beta_sum() const;
};

/// Natural coordinates carry the slope gamma; reporting coordinates replace
/// it with eta = gamma / (1 + gamma).
enum class Coords { natural, reporting };

inline double eta_from_gamma(double gamma) { return gamma / (1.0 + gamma); }
inline double gamma_from_eta(double eta) { return eta / (1.0 - eta); }

ModelSpec spec_of(const ParamVector& theta);
Eigen::VectorXd to_vector(const ParamVector& theta, Coords coords = Coords::natural);
ParamVector from_vector(const Eigen::VectorXd& v, const ModelSpec& spec,
                        Coords coords = Coords::natural);
std::vector<std::string> parameter_names(const ModelSpec& spec, Coords coords = Coords::natural);

/// Index of gamma_l within the flattened layout.
std::size_t gamma_index(const ModelSpec& spec, std::size_t l);

/// Checks the sign, ordering and persistence constraints; intercept
/// positivity is checked separately on a grid by intercept_path().
void validate(const ParamVector& theta);

// ---------------------------------------------------------------------------
// Transitions

/// G(u; gamma, c) = 1 / (1 + exp(-gamma * prod_k (u - c_k))). The exponent is
/// clamped to +-700.
double logistic_g(double u, const TransitionParams& t);

struct TransitionDerivatives {
  int order = 1;
  // order 1: {dG/dgamma, dG/dc}
  // order 2: {d2/dgamma2, d2/dgamma dc, d2/dc2}
  // order 3: {d3/dgamma3, d3/dgamma2 dc, d3/dgamma dc2, d3/dc3}
  std::vector<double> values;
};

/// Closed-form partial derivatives of G for a single location parameter.
/// Throws unsupported_order when K > 1 or order is not 1, 2 or 3.
TransitionDerivatives transition_derivatives(double u, const TransitionParams& t, int order);

/// g(u; theta_1) = sum_l alpha0l * G_l(u).
double transition_sum(double u, const ParamVector& theta);

/// alpha0 + g(t/T) for t = 1..T. Throws nonpositive_intercept.
std::vector<double> intercept_path(const ParamVector& theta, std::size_t T);

// ---------------------------------------------------------------------------
// Conditional variance

/// Default initial variance: (alpha0 + g(1/T)) / (1 - persistence).
double default_initial_variance(const ParamVector& theta, std::size_t T);

/// Exact recursion. h_init holds h_1..h_q (empty: default initial variance).
/// Squared returns before the sample are taken as zero. Returns T + 1 values:
/// h_1..h_T followed by the one-step-ahead h_{T+1}.
std::vector<double> variance_recursion(const ParamVector& theta, std::span<const double> x2,
                                       std::span<const double> h_init = {});

struct RepresentationCoeffs {
  double c0 = 0.0;
  std::vector<double> c;  // c[i-1] = c_i
  std::vector<double> d;  // d[i-1] = d_i
  double rho0 = 0.0;      // sum of betas
};

/// h_t = c0 + sum_i d_i g_{t-i+1} + sum_i c_i X^2_{t-i}, with d_i = psi_{i-1}
/// and c_i = sum_j alpha_j psi_{i-j} where psi is the impulse response of
/// 1 / (1 - beta_1 z - ... - beta_q z^q), generated by the companion
/// recursion psi_k = sum_j beta_j psi_{k-j}.
RepresentationCoeffs representation_coeffs(const ParamVector& theta, std::size_t horizon);

/// Untruncated representation with zero pre-sample, evaluated directly by
/// nested sums (O(T^2)); used as a reference.
std::vector<double> representation_variance(const ParamVector& theta, std::span<const double> x2);

// ---------------------------------------------------------------------------
// Fourth-moment condition for GARCH(1,1)

struct MomentCheck {
  bool exists = false;
  double margin = 0.0;  // 1 - (beta^2 + 2 alpha beta m2 + alpha^2 m4)
};

MomentCheck fourth_moment_check(double alpha1, double beta1, double m2 = 1.0, double m4 = 3.0);

struct MomentRegion {
  std::vector<double> alpha_grid;
  std::vector<double> beta_grid;
  // inside[i * beta_grid.size() + j] for (alpha_grid[i], beta_grid[j])
  std::vector<bool> inside;
  // Boundary polyline beta(alpha) from alpha = 0 to alpha = 1/sqrt(m4).
  std::vector<double> boundary_alpha;
  std::vector<double> boundary_beta;
};

MomentRegion moment_region_grid(double m2, double m4, std::size_t resolution);

}  // namespace atvgarch
