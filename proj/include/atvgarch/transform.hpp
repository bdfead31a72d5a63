#pragma once

#include <Eigen/Dense>

#include "atvgarch/model.hpp"

namespace atvgarch {

/// Bijection between R^dim and the constrained parameter space:
///   alpha0          = exp(z)
///   (alphas, betas) = s * w / (1 + sum w),  w = exp(z),  s = 1 - persistence_margin
///   eta_l           = eta_max * logistic(z),  gamma_l = eta_l / (1 - eta_l)
///   locations       = cumulative sums of exp(z) over (1 + sum exp(z)), taken
///                     jointly over every transition so c_11 < ... < c_LK
///   alpha0l         = z
class ParamTransform {
 public:
  static constexpr double kEtaMax = 0.999;
  static constexpr double kPersistenceMargin = 1e-6;

  explicit ParamTransform(ModelSpec spec);

  const ModelSpec& spec() const { return spec_; }

  /// Natural parameters to z. Values on or beyond a bound are pulled just
  /// inside it.
  Eigen::VectorXd to_unconstrained(const ParamVector& theta) const;
  ParamVector to_natural(const Eigen::VectorXd& z) const;

  /// d theta_natural / d z (dim x dim).
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& z) const;

 private:
  ModelSpec spec_;
  std::vector<Eigen::Index> location_pos_;  // flattened positions of all c's in order
  std::vector<Eigen::Index> eta_pos_;
};

}  // namespace atvgarch
