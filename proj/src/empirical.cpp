#include "atvgarch/empirical.hpp"

#include <cmath>
#include <cstdio>

#include "atvgarch/error.hpp"

namespace atvgarch {

namespace {

// Best of several starts; the GARCH-nested start (alpha01 = 0) keeps the
// ATV likelihood at or above the GARCH one.
FitResult fit_atv(const SeriesFrame& series, const FitResult& garch, const EmpiricalOptions& opts) {
  const ModelSpec spec = ModelSpec::atv(1, 1, {1});
  std::vector<ParamVector> starts;
  ParamVector nested = garch.theta_hat;
  nested.transitions = {TransitionParams{gamma_from_eta(0.9), {0.5}, 0.0}};
  starts.push_back(nested);
  starts.push_back(auto_start(series, spec));
  for (double c : opts.location_grid) {
    for (double sign : {-1.0, 1.0}) {
      ParamVector s = garch.theta_hat;
      // shift the level so the intercept changes by half its size at c
      s.transitions = {TransitionParams{gamma_from_eta(0.95), {c}, sign * 0.5 * s.alpha0}};
      if (sign > 0) s.alpha0 *= 0.75;
      starts.push_back(s);
    }
  }

  FitOptions fo = opts.fit;
  fo.covariance = false;
  FitResult best;
  bool have = false;
  for (const auto& s : starts) {
    fo.start = s;
    FitResult r;
    try {
      r = fit(series, spec, fo);
    } catch (const Error&) {
      continue;
    }
    if (!have || r.loglik > best.loglik) {
      best = std::move(r);
      have = true;
    }
  }
  if (!have) throw Error(ErrorCode::nonfinite_likelihood, "no ATV-GARCH start could be fitted");
  fo = opts.fit;
  fo.start = best.theta_hat;
  FitResult final_fit = fit(series, spec, fo);
  if (final_fit.loglik >= best.loglik) return final_fit;
  const Covariance cov = sandwich_covariance(best.theta_hat, series, opts.fit.likelihood);
  best.cov_robust = cov.robust;
  best.cov_nonrobust = cov.nonrobust;
  best.kappa = cov.kappa;
  best.se_reliable = cov.reliable;
  best.se_robust = cov.robust.diagonal().cwiseMax(0.0).cwiseSqrt();
  best.se_nonrobust = cov.nonrobust.diagonal().cwiseMax(0.0).cwiseSqrt();
  return best;
}

}  // namespace

EmpiricalReport empirical_pipeline(const std::vector<double>& returns, const EmpiricalOptions& opts) {
  EmpiricalReport rep;
  if (returns.size() < opts.recommended_length)
    rep.warnings.push_back("series has " + std::to_string(returns.size()) +
                           " observations; at least " + std::to_string(opts.recommended_length) +
                           " are recommended");
  rep.stats = summary_stats(returns);
  const SeriesFrame series = SeriesFrame::from_returns(returns);

  rep.garch_fit = fit(series, ModelSpec::garch(1, 1), opts.fit);
  rep.lm_sequence.push_back(
      {"L=0", lm_constancy_test(series, rep.garch_fit, opts.taylor_order, opts.fit.likelihood)});

  rep.atv_fit = fit_atv(series, rep.garch_fit, opts);
  rep.lm_sequence.push_back(
      {"L=1", lm_constancy_test(series, rep.atv_fit, opts.taylor_order, opts.fit.likelihood)});

  rep.persistence_before = rep.garch_fit.persistence;
  rep.persistence_after = rep.atv_fit.persistence;
  rep.lm0_rejects = rep.lm_sequence[0].result.p_value < opts.alpha;
  rep.persistence_consistent = !rep.lm0_rejects || rep.persistence_after < rep.persistence_before;
  if (!rep.garch_fit.converged) rep.warnings.push_back("GARCH fit did not converge");
  if (!rep.atv_fit.converged) rep.warnings.push_back("ATV-GARCH fit did not converge");
  if (rep.atv_fit.eta_at_bound) rep.warnings.push_back("ATV-GARCH slope estimate is at its bound");
  if (!rep.persistence_consistent)
    rep.warnings.push_back("LM(L=0) rejects but persistence did not decrease");
  return rep;
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string pval(double p) { return p < 0.0005 ? "<0.001" : fmt(p); }

std::string pad(std::string s, std::size_t w) {
  if (s.size() < w) s.insert(0, w - s.size(), ' ');
  return s;
}

}  // namespace

std::string format_report(const EmpiricalReport& r) {
  std::string out;
  auto line = [&](std::initializer_list<std::string> cells, std::size_t first = 14) {
    std::size_t i = 0;
    for (const auto& c : cells) {
      if (i == 0) {
        out += c;
        out.append(first > c.size() ? first - c.size() : 1, ' ');
      } else {
        out += pad(c, 10);
      }
      ++i;
    }
    out += '\n';
  };

  const auto& s = r.stats;
  out += "Panel A. Summary statistics\n";
  line({"", "Mean", "Sd", "Med", "Min", "Max", "Skew", "R Skew", "Kurt", "R Kurt"});
  line({"returns", fmt(s.mean), fmt(s.sd), fmt(s.median), fmt(s.min), fmt(s.max), fmt(s.skew),
        fmt(s.robust_skew), fmt(s.kurtosis), fmt(s.robust_kurtosis)});
  out += "\nPanel B. Misspecification tests\n";
  line({"Null", "LM(" + std::to_string(r.lm_sequence.empty() ? 3 : r.lm_sequence[0].result.df) + ")",
        "R LM", "p-val", "R p-val", "alpha1", "beta1", "a1+b1"});
  for (const auto& e : r.lm_sequence) {
    const FitResult& f = e.result.null_fit;
    const double pers = f.persistence;
    line({e.null_label, fmt(e.result.stat), fmt(e.result.robust_stat), pval(e.result.p_value),
          pval(e.result.robust_p_value), fmt(f.theta_hat.alphas[0]), fmt(f.theta_hat.betas[0]),
          pers > 0.999 ? "> 0.999" : fmt(pers)});
  }
  out += "\nPanel C. ATV-GARCH(1,1) model\n";
  line({"Parameter", "Estimate", "Se", "R se"});
  const auto names = parameter_names(r.atv_fit.spec, Coords::reporting);
  const Eigen::VectorXd est = r.atv_fit.estimates(Coords::reporting);
  for (std::size_t i = 0; i < names.size(); ++i) {
    const Eigen::Index k = static_cast<Eigen::Index>(i);
    const bool scaled = names[i].rfind("alpha0", 0) == 0;
    const double f = scaled ? 100.0 : 1.0;
    const double se = r.atv_fit.se_nonrobust.size() > k ? r.atv_fit.se_nonrobust[k] : NAN;
    const double rse = r.atv_fit.se_robust.size() > k ? r.atv_fit.se_robust[k] : NAN;
    line({scaled ? "100 x " + names[i] : names[i], fmt(f * est[k]), fmt(f * se), fmt(f * rse)});
  }
  if (!r.warnings.empty()) {
    out += "\nWarnings\n";
    for (const auto& w : r.warnings) out += "  " + w + "\n";
  }
  return out;
}

}  // namespace atvgarch
