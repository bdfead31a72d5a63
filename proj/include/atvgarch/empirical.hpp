#pragma once

#include <string>
#include <vector>

#include "atvgarch/estimator.hpp"
#include "atvgarch/lm_test.hpp"
#include "atvgarch/stats.hpp"

namespace atvgarch {

struct EmpiricalOptions {
  FitOptions fit{};
  std::size_t taylor_order = 3;
  std::vector<double> location_grid{0.2, 0.35, 0.5, 0.65, 0.8};
  double alpha = 0.05;  // level at which LM(L=0) counts as rejecting
  std::size_t recommended_length = 1000;
};

struct LmEntry {
  std::string null_label;  // "L=0" or "L=1"
  LmResult result;
};

struct EmpiricalReport {
  SummaryStats stats;
  FitResult garch_fit;
  FitResult atv_fit;
  std::vector<LmEntry> lm_sequence;
  double persistence_before = 0.0;
  double persistence_after = 0.0;
  bool lm0_rejects = false;
  // persistence_after < persistence_before, or LM(L=0) does not reject
  bool persistence_consistent = true;
  std::vector<std::string> warnings;
};

/// Summary statistics, GARCH(1,1) fit, LM against L = 0, ATV-GARCH(1,1) fit
/// with one transition, LM against L = 1.
EmpiricalReport empirical_pipeline(const std::vector<double>& returns,
                                   const EmpiricalOptions& opts = {});

/// Three-panel text table; alpha0 and alpha01 rows are scaled by 100.
std::string format_report(const EmpiricalReport& r);

}  // namespace atvgarch
