#pragma once
// Reference implementations used only by tests. Written directly from the
// model definitions, without the library's kernels or representation code.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

// Plain GARCH(1,1) truncated representation:
//   h_t = a0/(1-b) + sum_{k=0}^{min(m-1,t-1)} a b^k x2_{t-1-k}
inline std::vector<double> garch11_h(double a0, double a1, double b1,
                                     const std::vector<double>& x2, std::size_t m) {
  const std::size_t T = x2.size();
  std::vector<double> h(T);
  for (std::size_t t = 0; t < T; ++t) {
    double v = a0 / (1.0 - b1);
    double bk = 1.0;
    for (std::size_t k = 0; k < m && k < t; ++k) {
      v += a1 * bk * x2[t - 1 - k];
      bk *= b1;
    }
    h[t] = v;
  }
  return h;
}

inline double garch11_loglik(const Eigen::Vector3d& th, const std::vector<double>& x2,
                             std::size_t m) {
  const auto h = garch11_h(th[0], th[1], th[2], x2, m);
  double s = 0.0;
  for (std::size_t t = 0; t < x2.size(); ++t) s += -0.5 * (std::log(h[t]) + x2[t] / h[t]);
  return s / static_cast<double>(x2.size());
}

// Analytic gradient of garch11_loglik, by direct differentiation of the sums.
inline Eigen::Vector3d garch11_score(const Eigen::Vector3d& th, const std::vector<double>& x2,
                                     std::size_t m) {
  const double a0 = th[0], a1 = th[1], b1 = th[2];
  const std::size_t T = x2.size();
  Eigen::Vector3d g = Eigen::Vector3d::Zero();
  for (std::size_t t = 0; t < T; ++t) {
    double h = a0 / (1.0 - b1);
    Eigen::Vector3d dh(1.0 / (1.0 - b1), 0.0, a0 / ((1.0 - b1) * (1.0 - b1)));
    double bk = 1.0;
    for (std::size_t k = 0; k < m && k < t; ++k) {
      const double x = x2[t - 1 - k];
      h += a1 * bk * x;
      dh[1] += bk * x;
      if (k > 0) dh[2] += a1 * static_cast<double>(k) * (bk / b1) * x;
      bk *= b1;
    }
    g += -0.5 * (1.0 - x2[t] / h) / h * dh;
  }
  return g / static_cast<double>(T);
}

// Richardson-extrapolated central differences, O(h^4).
inline Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& x, double rel = 1e-4) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = rel * std::max(1.0, std::abs(x[i]));
    auto cd = [&](double s) {
      Eigen::VectorXd p = x, q = x;
      p[i] += s;
      q[i] -= s;
      return (f(p) - f(q)) / (2.0 * s);
    };
    g[i] = (4.0 * cd(h / 2.0) - cd(h)) / 3.0;
  }
  return g;
}

inline Eigen::MatrixXd fd_jacobian(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& x, double h = 1e-6) {
  const Eigen::VectorXd f0 = f(x);
  Eigen::MatrixXd J(f0.size(), x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Eigen::VectorXd p = x, q = x;
    p[i] += h;
    q[i] -= h;
    J.col(i) = (f(p) - f(q)) / (2.0 * h);
  }
  return J;
}

inline double max_rel_error(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double floor = 1e-8) {
  double e = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i)
    e = std::max(e, std::abs(a[i] - b[i]) / std::max(std::abs(b[i]), floor));
  return e;
}

}  // namespace oracle
