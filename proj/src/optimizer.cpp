#include "atvgarch/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "atvgarch/error.hpp"

namespace atvgarch {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Probe {
  double a = 0.0;
  double f = kInf;
  double df = 0.0;
  Eigen::VectorXd g;
  bool ok = false;
};

class LineSearch {
 public:
  LineSearch(const Objective& obj, const Eigen::VectorXd& x, const Eigen::VectorXd& p,
             std::size_t& evals)
      : obj_(obj), x_(x), p_(p), evals_(evals) {}

  Probe eval(double a) {
    Probe r;
    r.a = a;
    double f = 0.0;
    Eigen::VectorXd g;
    ++evals_;
    if (obj_(x_ + a * p_, f, g) && std::isfinite(f) && g.allFinite()) {
      r.f = f;
      r.g = std::move(g);
      r.df = r.g.dot(p_);
      r.ok = true;
    }
    return r;
  }

  // Nocedal & Wright, algorithms 3.5 and 3.6.
  Probe run(const Probe& zero, double a1) {
    const double c1 = 1e-4, c2 = 0.9;
    Probe prev = zero;
    double a = a1;
    Probe best = zero;
    for (int i = 0; i < 40; ++i) {
      Probe cur = eval(a);
      if (!cur.ok) {
        // outside the domain: shrink toward the last good point
        a = prev.a + 0.3 * (a - prev.a);
        if (a - prev.a < 1e-16) break;
        continue;
      }
      if (cur.f < best.f) best = cur;
      if (cur.f > zero.f + c1 * a * zero.df || (i > 0 && cur.f >= prev.f))
        return zoom(zero, prev, cur, best);
      if (std::abs(cur.df) <= -c2 * zero.df) return cur;
      if (cur.df >= 0.0) return zoom(zero, cur, prev, best);
      prev = cur;
      a *= 2.0;
    }
    return best;
  }

 private:
  Probe zoom(const Probe& zero, Probe lo, Probe hi, Probe best) {
    const double c1 = 1e-4, c2 = 0.9;
    for (int i = 0; i < 40; ++i) {
      double a = interpolate(lo, hi);
      Probe cur = eval(a);
      if (!cur.ok) {
        hi = cur;
        hi.f = kInf;
        continue;
      }
      if (cur.f < best.f) best = cur;
      if (cur.f > zero.f + c1 * a * zero.df || cur.f >= lo.f) {
        hi = cur;
      } else {
        if (std::abs(cur.df) <= -c2 * zero.df) return cur;
        if (cur.df * (hi.a - lo.a) >= 0.0) hi = lo;
        lo = cur;
      }
      if (std::abs(hi.a - lo.a) < 1e-16 * std::max(1.0, std::abs(lo.a))) break;
    }
    return best;
  }

  static double interpolate(const Probe& lo, const Probe& hi) {
    const double lo_a = std::min(lo.a, hi.a), hi_a = std::max(lo.a, hi.a);
    double a = 0.5 * (lo.a + hi.a);
    if (std::isfinite(hi.f)) {
      // cubic through both ends
      const double d1 = lo.df + hi.df - 3.0 * (lo.f - hi.f) / (lo.a - hi.a);
      const double disc = d1 * d1 - lo.df * hi.df;
      if (disc >= 0.0) {
        const double d2 = std::copysign(std::sqrt(disc), hi.a - lo.a);
        const double c = hi.a - (hi.a - lo.a) * (hi.df + d2 - d1) / (hi.df - lo.df + 2.0 * d2);
        if (std::isfinite(c)) a = c;
      }
    }
    const double margin = 0.1 * (hi_a - lo_a);
    return std::clamp(a, lo_a + margin, hi_a - margin);
  }

  const Objective& obj_;
  const Eigen::VectorXd& x_;
  const Eigen::VectorXd& p_;
  std::size_t& evals_;
};

}  // namespace

OptimizeResult minimize_bfgs(const Objective& objective, const Eigen::VectorXd& z0,
                             const OptimizerOptions& opts) {
  OptimizeResult res;
  res.z = z0;
  if (!objective(res.z, res.f, res.g) || !std::isfinite(res.f) || !res.g.allFinite())
    throw Error(ErrorCode::invalid_argument, "optimizer start point is infeasible");
  res.evaluations = 1;

  const Eigen::Index n = z0.size();
  Eigen::MatrixXd H = Eigen::MatrixXd::Identity(n, n);
  bool scaled = false;
  int soft_failures = 0;

  while (res.iterations < opts.max_iterations) {
    if (res.g.lpNorm<Eigen::Infinity>() <= opts.gtol) {
      res.converged = true;
      break;
    }
    Eigen::VectorXd p = -H * res.g;
    if (p.dot(res.g) >= 0.0) {
      H.setIdentity();
      scaled = false;
      p = -res.g;
    }
    double a1 = 1.0;
    const double pmax = p.lpNorm<Eigen::Infinity>();
    if (!scaled || pmax * a1 > opts.max_step) a1 = std::min(1.0, opts.max_step / pmax);

    Probe zero;
    zero.f = res.f;
    zero.g = res.g;
    zero.df = p.dot(res.g);
    zero.ok = true;
    LineSearch ls(objective, res.z, p, res.evaluations);
    Probe step = ls.run(zero, a1);
    ++res.iterations;

    if (step.a == 0.0 || !(step.f < res.f)) {
      res.trace.push_back(res.f);
      if (scaled && soft_failures == 0) {
        // restart from steepest descent once before giving up
        H.setIdentity();
        scaled = false;
        ++soft_failures;
        continue;
      }
      break;
    }
    soft_failures = 0;
    const Eigen::VectorXd s = step.a * p;
    const Eigen::VectorXd y = step.g - res.g;
    const double f_old = res.f;
    res.z += s;
    res.f = step.f;
    res.g = step.g;
    res.trace.push_back(res.f);

    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      if (!scaled) {
        H = Eigen::MatrixXd::Identity(n, n) * (sy / y.squaredNorm());
        scaled = true;
      }
      const double rho = 1.0 / sy;
      const Eigen::VectorXd Hy = H * y;
      H += (rho * rho * y.dot(Hy) + rho) * (s * s.transpose()) -
           rho * (Hy * s.transpose() + s * Hy.transpose());
    }

    if (res.g.lpNorm<Eigen::Infinity>() <= opts.gtol) {
      res.converged = true;
      break;
    }
    if (s.lpNorm<Eigen::Infinity>() <= opts.xtol ||
        std::abs(f_old - res.f) <= opts.ftol * (1.0 + std::abs(res.f))) {
      res.converged = res.g.lpNorm<Eigen::Infinity>() <= 1e3 * opts.gtol;
      break;
    }
  }
  return res;
}

}  // namespace atvgarch
