#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "proxflow/catalog.hpp"
#include "proxflow/integrator.hpp"
#include "proxflow/rate.hpp"
#include "proxflow/rng.hpp"

using namespace proxflow;
using Catch::Approx;

namespace {

Vector vec1(double a) {
  Vector v(1);
  v << a;
  return v;
}

Trajectory stationary_lasso(double stop_tol) {
  const auto problems = catalog();
  const auto& lasso = problems[1];
  const SystemParams p{0.5, 1.0, 0.1, lasso.smooth.lipschitz};
  IntegrateOptions opts;
  opts.t_max = 1000.0;
  opts.stop_tol = stop_tol;
  opts.sample_stride = 5;
  return integrate(lasso, p, vec1(3.0), vec1(0.0), opts);
}

}  // namespace

TEST_CASE("exponent map and its inverse") {
  REQUIRE(theta_from_polynomial_slope(-0.5) == Approx(0.75).margin(1e-12));
  REQUIRE(theta_from_polynomial_slope(-1.0) == Approx(2.0 / 3.0).margin(1e-12));
  REQUIRE(theta_from_polynomial_slope(-1e9) == Approx(0.5).margin(1e-8));
  REQUIRE(theta_from_polynomial_slope(-1e9) > 0.5);
  REQUIRE_THROWS_AS(theta_from_polynomial_slope(0.0), InvalidSlopeError);
  REQUIRE_THROWS_AS(theta_from_polynomial_slope(0.3), InvalidSlopeError);

  SECTION("round trip is exact to 1e-12") {
    for (double theta = 0.505; theta < 0.999; theta += 0.001) {
      const double s = polynomial_slope_from_theta(theta);
      REQUIRE(theta_from_polynomial_slope(s) == Approx(theta).margin(1e-12));
    }
  }
}

TEST_CASE("synthetic exponential decay is classified with its rate") {
  std::vector<double> t, d;
  for (int k = 0; k <= 400; ++k) {
    t.push_back(k * 0.025);
    d.push_back(std::exp(-2.0 * t.back()));
  }
  const RateReport rep = classify_rate(make_synthetic_signal(t, d, 1e-9));
  REQUIRE(rep.regime == RateRegime::exponential);
  REQUIRE(rep.fit_b == Approx(2.0).margin(0.01));
  REQUIRE(rep.theta_hat);
  REQUIRE(*rep.theta_hat == 0.5);
}

TEST_CASE("synthetic polynomial decay recovers theta = 0.75") {
  Rng rng(99);
  std::vector<double> t, d;
  for (int k = 0; k <= 2000; ++k) {
    t.push_back(static_cast<double>(k));
    d.push_back(std::pow(1.0 + t.back(), -0.5) * (1.0 + 0.01 * rng.uniform(-1.0, 1.0)));
  }
  const RateReport rep = classify_rate(make_synthetic_signal(t, d, 1e-9));
  REQUIRE(rep.regime == RateRegime::polynomial);
  REQUIRE(rep.theta_hat);
  REQUIRE(*rep.theta_hat == Approx(0.75).margin(0.05));
}

TEST_CASE("all-zero decay is trivially finite-time") {
  const auto problems = catalog();
  const auto& lasso = problems[1];
  const SystemParams p{0.5, 1.0, 0.01, lasso.smooth.lipschitz};
  const Vector xbar = lasso.known_critical_points.at(0);
  IntegrateOptions opts;
  opts.t_max = 10.0;
  const Trajectory traj = integrate(lasso, p, xbar, -(p.a / p.b) * xbar, opts);
  const DecaySignal sig = decay_signal(traj, limit_report(traj));
  REQUIRE(sig.trivially_converged);
  const RateReport rep = classify_rate(sig);
  REQUIRE(rep.regime == RateRegime::finite_time);
  REQUIRE(rep.theta_interval);
  REQUIRE(rep.theta_interval->first == 0.0);
  REQUIRE(rep.theta_interval->second == 0.5);
}

TEST_CASE("decay signal invariants on an accepted trajectory") {
  // tight stop tolerance keeps the truncated-tail term below the slack
  const Trajectory traj = stationary_lasso(1e-10);
  REQUIRE(traj.stop_reason == StopReason::stationarity);
  const DecaySignal sig = decay_signal(traj, limit_report(traj));
  for (std::size_t k = 0; k + 1 < sig.sigma.size(); ++k) {
    REQUIRE(sig.sigma[k + 1] <= sig.sigma[k]);
  }
  for (std::size_t k = 0; k < sig.values.size(); ++k) {
    REQUIRE(sig.values[k] <= sig.sigma[k] + 1e-9);
  }
}

TEST_CASE("decay of the linear problem matches the matrix exponential") {
  Matrix q(1, 1);
  q << 1.0;
  const auto prob = make_quadratic(q, Vector::Zero(1));
  const SystemParams p{0.5, 1.0, 0.1, 1.0};
  IntegrateOptions opts;
  opts.t_max = 1000.0;
  opts.stop_tol = 1e-10;
  opts.sample_stride = 5;
  const Trajectory traj = integrate(prob, p, vec1(1.0), vec1(0.0), opts);
  REQUIRE(traj.stop_reason == StopReason::stationarity);
  const DecaySignal sig = decay_signal(traj, limit_report(traj));

  Matrix a_mat(2, 2);
  a_mat << -(p.gamma + p.a), -p.b, -p.a, -p.b;
  const Eigen::EigenSolver<Matrix> es(a_mat);
  const Eigen::MatrixXcd v = es.eigenvectors();
  Eigen::VectorXcd w = v.inverse() * Eigen::Vector2cd(1.0, 0.0);
  for (std::size_t k = 0; k < sig.usable; ++k) {
    Eigen::Vector2cd s = Eigen::Vector2cd::Zero();
    for (int i = 0; i < 2; ++i) {
      s += std::exp(es.eigenvalues()[i] * sig.times[k]) * w[i] * v.col(i);
    }
    const double d_exact = std::abs(s[0].real()) + std::abs(s[1].real());
    REQUIRE(sig.values[k] == Approx(d_exact).margin(1e-6));
  }
}

TEST_CASE("too few usable samples is an error") {
  SECTION("from a synthetic signal") {
    std::vector<double> t, d;
    for (int k = 0; k < 10; ++k) {
      t.push_back(k);
      d.push_back(std::exp(-0.5 * k));
    }
    const DecaySignal sig = make_synthetic_signal(t, d, 1e-9);
    REQUIRE_THROWS_AS(classify_rate(sig), InsufficientDataError);
  }
  SECTION("from an oversampled trajectory") {
    const auto problems = catalog();
    const auto& lasso = problems[1];
    const SystemParams p{0.5, 1.0, 0.1, lasso.smooth.lipschitz};
    IntegrateOptions opts;
    opts.t_max = 1000.0;
    opts.sample_stride = 1 << 14;  // a handful of retained samples
    const Trajectory traj = integrate(lasso, p, vec1(3.0), vec1(0.0), opts);
    REQUIRE(traj.stop_reason == StopReason::stationarity);
    REQUIRE_THROWS_AS(decay_signal(traj, limit_report(traj)), InsufficientDataError);
  }
}

TEST_CASE("regime recovery across the three model families") {
  Rng rng(2024);
  int correct = 0;
  int poly_total = 0, poly_theta_ok = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int family = static_cast<int>(rng.uniform(0.0, 3.0));
    const double t_end = 400.0;
    const int m = 800;
    std::vector<double> ts(m), ds(m);
    const double amp = rng.uniform(0.5, 2.0);
    double theta_true = 0.0;
    if (family == 0) {
      const double b1 = rng.uniform(0.05, 0.4);
      for (int k = 0; k < m; ++k) {
        ts[k] = t_end * k / (m - 1);
        ds[k] = amp * std::exp(-b1 * ts[k]) * (1.0 + 0.01 * rng.uniform(-1.0, 1.0));
      }
    } else if (family == 1) {
      theta_true = rng.uniform(0.6, 0.9);
      const double power = (1.0 - theta_true) / (2.0 * theta_true - 1.0);
      for (int k = 0; k < m; ++k) {
        ts[k] = t_end * k / (m - 1);
        ds[k] = amp * std::pow(1.0 + ts[k], -power) * (1.0 + 0.01 * rng.uniform(-1.0, 1.0));
      }
    } else {
      const double q = rng.uniform(1.1, 3.0);
      const double t0 = rng.uniform(0.3, 0.6) * t_end;
      for (int k = 0; k < m; ++k) {
        ts[k] = t_end * k / (m - 1);
        const double base = std::max(0.0, 1.0 - ts[k] / t0);
        ds[k] = amp * std::pow(base, q) * (1.0 + 0.01 * rng.uniform(-1.0, 1.0));
      }
    }
    const DecaySignal sig = make_synthetic_signal(ts, ds, 1e-6);
    const RateRegime want = family == 0   ? RateRegime::exponential
                            : family == 1 ? RateRegime::polynomial
                                          : RateRegime::finite_time;
    const RateReport rep = classify_rate(sig);
    if (rep.regime == want) ++correct;
    if (family == 1) {
      ++poly_total;
      if (rep.theta_hat && std::abs(*rep.theta_hat - theta_true) <= 0.05) ++poly_theta_ok;
    }
  }
  REQUIRE(correct >= 95);
  REQUIRE(poly_theta_ok == poly_total);
}

TEST_CASE("synthetic signals have valid sigma envelopes") {
  Rng rng(5);
  std::vector<double> t, d;
  for (int k = 0; k < 50; ++k) {
    t.push_back(k);
    d.push_back(std::exp(-0.1 * k) * (1.0 + 0.3 * rng.uniform(-1.0, 1.0)));
  }
  const DecaySignal sig = make_synthetic_signal(t, d, 1e-12);
  for (std::size_t k = 0; k + 1 < sig.sigma.size(); ++k) {
    REQUIRE(sig.sigma[k + 1] <= sig.sigma[k]);
    REQUIRE(sig.values[k] <= sig.sigma[k]);
  }
}
