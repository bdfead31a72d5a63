#pragma once
// LM test of a constant intercept (or of no additional transition) against
// a logistic-transition alternative, using a Taylor expansion of the
// alternative around the null: the intercept picks up delta_k (t/T)^k,
// k = 1..order.

#include "atvgarch/estimator.hpp"

namespace atvgarch {

struct LmOptions {
  std::size_t taylor_order = 3;
  FitOptions fit{};
};

struct LmResult {
  double stat = 0.0;         // T (SSR0 - SSR1) / SSR0
  double robust_stat = 0.0;  // T - SSR of 1 on u_t r_t
  std::size_t df = 0;
  double p_value = 1.0;
  double robust_p_value = 1.0;
  FitResult null_fit;
};

/// Fits the null model (any L, including L = 0) and tests it.
LmResult lm_constancy_test(const SeriesFrame& series, const ModelSpec& null_spec,
                           const LmOptions& opts = {});

/// Tests an existing null fit. Throws singular_matrix when the auxiliary
/// regressors are collinear.
LmResult lm_constancy_test(const SeriesFrame& series, const FitResult& null_fit,
                           std::size_t taylor_order = 3, const LikelihoodConfig& cfg = {});

}  // namespace atvgarch
