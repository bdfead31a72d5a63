#include "atvgarch/montecarlo.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "atvgarch/error.hpp"
#include "atvgarch/rng.hpp"
#include "atvgarch/simulator.hpp"
#include "atvgarch/stats.hpp"

namespace atvgarch {

double design_gamma(double a, double b) {
  if (!(b > a)) throw Error(ErrorCode::invalid_argument, "design needs a < b");
  return 2.0 * std::log(99.0) / (b - a);
}

std::vector<std::string> dgp_names() { return {"DGP1", "DGP2", "DGP3"}; }

DgpSpec dgp(const std::string& name, std::size_t T, std::size_t reps, std::uint64_t seed) {
  double gamma = 0.0;
  if (name == "DGP1")
    gamma = 12.0;
  else if (name == "DGP2")
    gamma = 18.0;
  else if (name == "DGP3")
    gamma = 46.0;
  else
    throw Error(ErrorCode::invalid_argument, "unknown DGP '" + name + "'");
  DgpSpec d;
  d.name = name;
  d.theta_true = ParamVector{0.05, {0.1}, {0.8}, {TransitionParams{gamma, {0.5}, 0.15}}};
  d.T = T;
  d.reps = reps;
  d.seed = seed;
  return d;
}

std::uint64_t replication_seed(std::uint64_t master, std::size_t rep, std::size_t attempt) {
  return derive_seed(master, rep, attempt);
}

namespace {

struct RepOutcome {
  Eigen::VectorXd estimate;
  std::uint64_t seed = 0;
  std::size_t attempts = 0;
  bool converged = false;
  bool stuck = false;
  double loglik = 0.0;
};

RepOutcome run_replication(const DgpSpec& d, const McOptions& opts, std::size_t rep) {
  const ModelSpec spec = spec_of(d.theta_true);
  RepOutcome out;
  for (std::size_t attempt = 0; attempt < opts.max_attempts_per_rep; ++attempt) {
    SimConfig sc{d.theta_true, d.error_dist, d.T, d.burn_in, replication_seed(d.seed, rep, attempt)};
    const SeriesFrame series = simulate(sc);
    FitOptions fo = opts.fit;
    fo.start = d.theta_true;
    fo.seed = sc.seed;
    ++out.attempts;
    FitResult r;
    try {
      r = fit(series, spec, fo);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::nonfinite_likelihood) continue;
      throw;
    }
    if (r.eta_at_bound) continue;
    out.estimate = r.estimates(Coords::reporting);
    out.seed = sc.seed;
    out.converged = r.converged;
    out.loglik = r.loglik;
    for (std::size_t l = 0; l < spec.num_transitions(); ++l) {
      if (std::abs(r.theta_hat.transitions[l].gamma - d.theta_true.transitions[l].gamma) < 1e-8)
        out.stuck = true;
    }
    return out;
  }
  throw Error(ErrorCode::excessive_discards,
              "replication " + std::to_string(rep) + " exhausted its attempts");
}

}  // namespace

McResult run_mc(const DgpSpec& d, const McOptions& opts) {
  validate(d.theta_true);
  if (d.reps == 0) throw Error(ErrorCode::invalid_argument, "reps must be positive");
  const ModelSpec spec = spec_of(d.theta_true);
  const auto t0 = std::chrono::steady_clock::now();

  std::vector<RepOutcome> outcomes(d.reps);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> attempts{0}, discards{0};
  std::atomic<bool> abort{false};
  std::exception_ptr failure;
  std::mutex failure_mu;

  auto worker = [&] {
    while (!abort) {
      const std::size_t rep = next++;
      if (rep >= d.reps) break;
      try {
        outcomes[rep] = run_replication(d, opts, rep);
        attempts += outcomes[rep].attempts;
        discards += outcomes[rep].attempts - 1;
        const std::size_t a = attempts, k = discards;
        if (a >= 50 && static_cast<double>(k) > opts.max_discard_rate * static_cast<double>(a))
          throw Error(ErrorCode::excessive_discards,
                      std::to_string(k) + " of " + std::to_string(a) + " attempts discarded");
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        abort = true;
      }
    }
  };
  const std::size_t nthreads = std::max<std::size_t>(1, std::min(opts.threads, d.reps));
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  McResult res;
  const Eigen::Index dim = static_cast<Eigen::Index>(spec.dim());
  res.raw.resize(static_cast<Eigen::Index>(d.reps), dim);
  McSummary& s = res.summary;
  for (std::size_t r = 0; r < d.reps; ++r) {
    const RepOutcome& o = outcomes[r];
    res.raw.row(static_cast<Eigen::Index>(r)) = o.estimate.transpose();
    res.seeds.push_back(o.seed);
    res.converged.push_back(o.converged);
    res.stuck.push_back(o.stuck);
    res.loglik.push_back(o.loglik);
    s.attempts += o.attempts;
    s.discards += o.attempts - 1;
    s.not_converged += o.converged ? 0 : 1;
    s.stuck_at_start += o.stuck ? 1 : 0;
  }
  s.names = parameter_names(spec, Coords::reporting);
  const Eigen::VectorXd truth = to_vector(d.theta_true, Coords::reporting);
  s.truth.assign(truth.data(), truth.data() + dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    const Eigen::VectorXd col = res.raw.col(j);
    double mean = 0.0, mae = 0.0;
    for (Eigen::Index r = 0; r < col.size(); ++r) {
      mean += col[r];
      mae += std::abs(col[r] - truth[j]);
    }
    mean /= static_cast<double>(d.reps);
    double ss = 0.0;
    for (Eigen::Index r = 0; r < col.size(); ++r) ss += (col[r] - mean) * (col[r] - mean);
    s.mean.push_back(mean);
    s.sd.push_back(d.reps > 1 ? std::sqrt(ss / static_cast<double>(d.reps - 1)) : 0.0);
    s.mean_abs_error.push_back(mae / static_cast<double>(d.reps));
  }
  s.reps_used = d.reps;
  s.discard_rate = static_cast<double>(s.discards) / static_cast<double>(s.attempts);
  s.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (s.discard_rate > opts.max_discard_rate)
    throw Error(ErrorCode::excessive_discards,
                "discard rate " + std::to_string(s.discard_rate) + " exceeds the limit");
  return res;
}

Standardized standardized_estimates(const Eigen::MatrixXd& raw, std::size_t min_rows) {
  if (static_cast<std::size_t>(raw.rows()) < min_rows)
    throw Error(ErrorCode::invalid_argument,
                "standardization needs at least " + std::to_string(min_rows) + " rows");
  Standardized out;
  out.z.resizeLike(raw);
  for (Eigen::Index j = 0; j < raw.cols(); ++j) {
    const Eigen::VectorXd col = raw.col(j);
    const Moments m = sample_moments(std::span<const double>(col.data(), col.size()));
    if (!(m.sd > 0.0))
      throw Error(ErrorCode::degenerate_series, "column " + std::to_string(j) + " is constant");
    out.z.col(j) = (col.array() - m.mean) / m.sd;
    out.skew.push_back(m.skew);
    out.excess_kurtosis.push_back(m.kurtosis - 3.0);
  }
  return out;
}

}  // namespace atvgarch
