#include <doctest.h>

#include <cmath>
#include <random>

#include "atvgarch/error.hpp"
#include "atvgarch/likelihood.hpp"
#include "atvgarch/rng.hpp"
#include "atvgarch/simulator.hpp"
#include "oracles.hpp"

using namespace atvgarch;

namespace {

const ParamVector kDgp2{0.05, {0.1}, {0.8}, {{18.0, {0.5}, 0.15}}};

Eigen::VectorXd fd_score(const ParamVector& th, const SeriesFrame& s, Coords c = Coords::natural) {
  const ModelSpec spec = spec_of(th);
  return oracle::fd_gradient(
      [&](const Eigen::VectorXd& v) { return quasi_loglik(from_vector(v, spec, c), s).loglik; },
      to_vector(th, c), 1e-4);
}

}  // namespace

TEST_CASE("zero data gives a constant per-observation likelihood") {
  SeriesFrame s = SeriesFrame::from_returns(std::vector<double>(100, 0.0));
  const ParamVector th{0.05, {0.1}, {0.8}, {}};
  const auto ev = quasi_loglik(th, s);
  for (double l : ev.per_obs) CHECK(l == doctest::Approx(-0.5 * std::log(0.05 / 0.2)));
}

TEST_CASE("first fitted variance has no data term") {
  const SeriesFrame s = simulate({kDgp2, {}, 1000, 100, 2});
  const auto h = truncated_variance(kDgp2, s);
  const double g1 = 0.15 / (1.0 + std::exp(-18.0 * (1.0 / 1000 - 0.5)));
  CHECK(h[0] == doctest::Approx(0.05 / 0.2 + g1));
}

TEST_CASE("per-observation formula and loglik average") {
  const SeriesFrame s = simulate({kDgp2, {}, 800, 100, 3});
  const auto ev = quasi_loglik(kDgp2, s);
  double sum = 0.0;
  for (std::size_t t = 0; t < s.size(); ++t) {
    CHECK(ev.per_obs[t] == doctest::Approx(-0.5 * (std::log(ev.h[t]) + s.x[t] * s.x[t] / ev.h[t])));
    sum += ev.per_obs[t];
  }
  CHECK(ev.loglik == doctest::Approx(sum / 800.0).epsilon(1e-14));
}

TEST_CASE("plain GARCH matches the standalone oracle") {
  std::mt19937_64 g(8);
  std::uniform_real_distribution<double> ua(0.02, 0.2), ub(0.5, 0.85), u0(0.01, 0.2);
  for (int i = 0; i < 10; ++i) {
    const double a0 = u0(g), a1 = ua(g), b1 = std::min(ub(g), 0.97 - a1);
    const ParamVector th{a0, {a1}, {b1}, {}};
    const SeriesFrame s = simulate({th, {}, 1500, 200, derive_seed(1, i, 0)});
    const auto x2 = s.squared();
    const Eigen::Vector3d v(a0, a1, b1);
    CHECK(quasi_loglik(th, s).loglik == doctest::Approx(oracle::garch11_loglik(v, x2, 200)).epsilon(1e-13));
    const Eigen::VectorXd sc = score(th, s);
    const Eigen::Vector3d ref = oracle::garch11_score(v, x2, 200);
    CHECK(oracle::max_rel_error(sc, ref, 1e-10) < 1e-9);
    // Hessian block against differences of the oracle score
    const Eigen::MatrixXd H = hessian(th, s);
    const Eigen::MatrixXd Href = oracle::fd_jacobian(
        [&](const Eigen::VectorXd& p) -> Eigen::VectorXd {
          return oracle::garch11_score(Eigen::Vector3d(p), x2, 200);
        },
        Eigen::VectorXd(v), 1e-6);
    CHECK(((H - 0.5 * (Href + Href.transpose())).cwiseAbs().maxCoeff()) <
          1e-6 * Href.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("truncated variance agrees with the exact recursion") {
  const SeriesFrame s = simulate({kDgp2, {}, 2000, 500, 4});
  const auto hbar = truncated_variance(kDgp2, s);
  const auto x2 = s.squared();
  const auto rc = representation_coeffs(kDgp2, 1);
  const double g1 = transition_sum(s.times[0], kDgp2);
  const std::vector<double> h1{rc.c0 + g1};
  const auto h = variance_recursion(kDgp2, x2, h1);
  double worst = 0.0;
  for (std::size_t t = 100; t < 2000; ++t) worst = std::max(worst, std::abs(h[t] - hbar[t]) / h[t]);
  CHECK(worst < 1e-10);
}

TEST_CASE("truncation lag matters only through a geometric tail") {
  const SeriesFrame s = simulate({kDgp2, {}, 2000, 500, 5});
  LikelihoodConfig a, b;
  b.truncation_lag = 400;
  CHECK(std::abs(quasi_loglik(kDgp2, s, a).loglik - quasi_loglik(kDgp2, s, b).loglik) < 1e-10);
}

TEST_CASE("analytic score matches finite differences") {
  std::mt19937_64 g(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 8; ++i) {
    ParamVector th = kDgp2;
    th.alphas[0] = 0.05 + 0.1 * u(g);
    th.betas[0] = 0.6 + 0.25 * u(g);
    th.transitions[0].gamma = 5.0 + 40.0 * u(g);
    th.transitions[0].c[0] = 0.3 + 0.4 * u(g);
    th.transitions[0].alpha0l = -0.03 + 0.2 * u(g);
    const SeriesFrame s = simulate({kDgp2, {}, 2000, 500, derive_seed(2, i, 0)});
    for (Coords c : {Coords::natural, Coords::reporting})
      CHECK(oracle::max_rel_error(score(th, s, {}, c), fd_score(th, s, c), 1e-6) < 1e-6);
  }
}

TEST_CASE("score for a two-location transition and a GARCH(2,2)") {
  const ParamVector th{0.05, {0.06, 0.03}, {0.5, 0.25}, {{15.0, {0.3, 0.7}, 0.1}}};
  const SeriesFrame s = simulate({th, {}, 2000, 500, 9});
  CHECK(oracle::max_rel_error(score(th, s), fd_score(th, s), 1e-6) < 1e-5);
}

TEST_CASE("score average equals the mean of per-observation scores") {
  const SeriesFrame s = simulate({kDgp2, {}, 1000, 200, 6});
  const auto S = per_observation_scores(kDgp2, s);
  const Eigen::VectorXd avg = S.colwise().mean().transpose();
  CHECK((avg - score(kDgp2, s)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("loglik is invariant to the slope parameterization") {
  const SeriesFrame s = simulate({kDgp2, {}, 1000, 200, 6});
  const Eigen::VectorXd r = to_vector(kDgp2, Coords::reporting);
  const ParamVector back = from_vector(r, spec_of(kDgp2), Coords::reporting);
  CHECK(quasi_loglik(back, s).loglik == doctest::Approx(quasi_loglik(kDgp2, s).loglik).epsilon(1e-14));
}

TEST_CASE("finite-difference Hessian is symmetric before symmetrization") {
  const SeriesFrame s = simulate({kDgp2, {}, 6000, 500, 12});
  for (Coords c : {Coords::natural, Coords::reporting}) {
    const Eigen::MatrixXd raw = hessian(kDgp2, s, {}, c, true);
    CHECK((raw - raw.transpose()).cwiseAbs().maxCoeff() < 1e-7);
  }
}

TEST_CASE("score has mean zero at the truth") {
  const int reps = 500;
  Eigen::MatrixXd S(reps, 6);
  for (int r = 0; r < reps; ++r) {
    // the zero pre-sample adds an O(1/T) bias to the alpha0 component
    const SeriesFrame s = simulate({kDgp2, {}, 4000, 500, derive_seed(77, r, 0)});
    S.row(r) = score(kDgp2, s).transpose();
  }
  const Eigen::VectorXd mean = S.colwise().mean();
  for (Eigen::Index j = 0; j < 6; ++j) {
    const double sd = std::sqrt((S.col(j).array() - mean[j]).square().sum() / (reps - 1));
    CHECK(std::abs(mean[j]) < 3.0 * sd / std::sqrt(double(reps)) + 1e-3 * sd);
  }
}

TEST_CASE("truth beats the constant-intercept restriction on DGP2 paths") {
  ParamVector restricted = kDgp2;
  restricted.transitions[0].alpha0l = 0.0;
  int wins = 0;
  for (int r = 0; r < 200; ++r) {
    const SeriesFrame s = simulate({kDgp2, {}, 3000, 500, derive_seed(31, r, 0)});
    wins += quasi_loglik(kDgp2, s).loglik > quasi_loglik(restricted, s).loglik;
  }
  CHECK(wins >= 190);
}

TEST_CASE("infeasible parameters are reported, not evaluated") {
  const SeriesFrame s = simulate({kDgp2, {}, 500, 100, 1});
  ParamVector bad = kDgp2;
  bad.transitions[0].alpha0l = -0.1;
  CHECK_FALSE(try_variance_filter(bad, s, {}, false).has_value());
  CHECK_THROWS_AS(quasi_loglik(bad, s), Error);
  bad = kDgp2;
  bad.betas[0] = 1.0;
  CHECK_FALSE(try_loglik_and_score(bad, s, {}).has_value());
}
