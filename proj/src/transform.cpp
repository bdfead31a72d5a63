#include "atvgarch/transform.hpp"

#include <algorithm>
#include <cmath>

#include "atvgarch/error.hpp"

namespace atvgarch {

namespace {

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }
double logit(double p) { return std::log(p / (1.0 - p)); }

}  // namespace

ParamTransform::ParamTransform(ModelSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  for (std::size_t l = 0; l < spec_.num_transitions(); ++l) {
    const auto gi = static_cast<Eigen::Index>(gamma_index(spec_, l));
    eta_pos_.push_back(gi);
    for (std::size_t k = 0; k < spec_.k_orders[l]; ++k)
      location_pos_.push_back(gi + 1 + static_cast<Eigen::Index>(k));
  }
}

Eigen::VectorXd ParamTransform::to_unconstrained(const ParamVector& theta) const {
  Eigen::VectorXd v = to_vector(theta, Coords::natural);
  if (static_cast<std::size_t>(v.size()) != spec_.dim())
    throw Error(ErrorCode::invalid_argument, "parameter vector does not match the model");
  Eigen::VectorXd z = v;
  z[0] = std::log(std::max(theta.alpha0, 1e-300));

  const double s = 1.0 - kPersistenceMargin;
  const Eigen::Index n = static_cast<Eigen::Index>(spec_.p + spec_.q);
  Eigen::VectorXd coef = v.segment(1, n).cwiseMax(1e-10);
  double total = coef.sum();
  if (total >= s * (1.0 - 1e-9)) {
    coef *= s * (1.0 - 1e-6) / total;
    total = coef.sum();
  }
  const double slack = 1.0 - total / s;
  for (Eigen::Index k = 0; k < n; ++k) z[1 + k] = std::log(coef[k] / s / slack);

  for (Eigen::Index pos : eta_pos_) {
    const double eta = std::clamp(eta_from_gamma(v[pos]), 1e-12, kEtaMax * (1.0 - 1e-12));
    z[pos] = logit(eta / kEtaMax);
  }

  if (!location_pos_.empty()) {
    std::vector<double> c;
    for (Eigen::Index pos : location_pos_) c.push_back(v[pos]);
    const double eps = 1e-9;
    double prev = 0.0;
    for (double& ci : c) {
      ci = std::clamp(ci, prev + eps, 1.0 - eps);
      prev = ci;
    }
    const double S = 1.0 / (1.0 - c.back());
    prev = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      z[location_pos_[i]] = std::log(std::max((c[i] - prev) * S, 1e-300));
      prev = c[i];
    }
  }
  return z;
}

ParamVector ParamTransform::to_natural(const Eigen::VectorXd& z) const {
  Eigen::VectorXd v = z;
  v[0] = std::exp(z[0]);
  const double s = 1.0 - kPersistenceMargin;
  const Eigen::Index n = static_cast<Eigen::Index>(spec_.p + spec_.q);
  const double zmax = z.segment(1, n).maxCoeff();
  // exp(z - zmax) keeps the softmax finite for large z
  const double shift = std::max(zmax, 0.0);
  double denom = std::exp(-shift);
  for (Eigen::Index k = 0; k < n; ++k) denom += std::exp(z[1 + k] - shift);
  for (Eigen::Index k = 0; k < n; ++k) v[1 + k] = s * std::exp(z[1 + k] - shift) / denom;

  for (Eigen::Index pos : eta_pos_) v[pos] = gamma_from_eta(kEtaMax * logistic(z[pos]));

  if (!location_pos_.empty()) {
    double S = 1.0;
    for (Eigen::Index pos : location_pos_) S += std::exp(z[pos]);
    double cum = 0.0;
    for (Eigen::Index pos : location_pos_) {
      cum += std::exp(z[pos]);
      v[pos] = cum / S;
    }
  }
  return from_vector(v, spec_, Coords::natural);
}

Eigen::MatrixXd ParamTransform::jacobian(const Eigen::VectorXd& z) const {
  const Eigen::Index dim = z.size();
  Eigen::MatrixXd J = Eigen::MatrixXd::Identity(dim, dim);
  const Eigen::VectorXd v = to_vector(to_natural(z), Coords::natural);
  J(0, 0) = v[0];

  const double s = 1.0 - kPersistenceMargin;
  const Eigen::Index n = static_cast<Eigen::Index>(spec_.p + spec_.q);
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index j = 0; j < n; ++j)
      J(1 + k, 1 + j) = (k == j ? v[1 + k] : 0.0) - v[1 + k] * v[1 + j] / s;

  for (Eigen::Index pos : eta_pos_) {
    const double sig = logistic(z[pos]);
    const double eta = kEtaMax * sig;
    J(pos, pos) = kEtaMax * sig * (1.0 - sig) / ((1.0 - eta) * (1.0 - eta));
  }

  if (!location_pos_.empty()) {
    double S = 1.0;
    for (Eigen::Index pos : location_pos_) S += std::exp(z[pos]);
    for (std::size_t a = 0; a < location_pos_.size(); ++a) {
      const double ca = v[location_pos_[a]];
      for (std::size_t b = 0; b < location_pos_.size(); ++b) {
        const double wb = std::exp(z[location_pos_[b]]) / S;
        J(location_pos_[a], location_pos_[b]) = (b <= a ? wb : 0.0) - ca * wb;
      }
    }
  }
  return J;
}

}  // namespace atvgarch
