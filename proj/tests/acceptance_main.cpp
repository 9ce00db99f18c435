// Acceptance suite: one criterion per check, one PASS/FAIL line each.
// Exit code 0 iff every criterion passes.

#include <Eigen/Eigenvalues>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "proxflow/brute_force.hpp"
#include "proxflow/catalog.hpp"
#include "proxflow/experiment.hpp"
#include "proxflow/integrator.hpp"
#include "proxflow/rate.hpp"
#include "proxflow/rng.hpp"
#include "proxflow/verify.hpp"

using namespace proxflow;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

Vector random_vec(Rng& rng, int n, double lo, double hi) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.uniform(lo, hi);
  return v;
}

// 1. admissibility implies m1 > 0 and m2 > 0; witness constants
Outcome criterion_parameter_implication() {
  Rng rng(20240511);
  int admissible = 0, violations = 0;
  for (int k = 0; k < 10000; ++k) {
    const SystemParams p{rng.uniform(1e-9, 2.0), rng.uniform(1e-9, 10.0), rng.uniform(1e-9, 1.0),
                         rng.uniform(0.0, 10.0)};
    if (!check_conditions(p).admissible()) continue;
    ++admissible;
    const LyapunovConstants k2 = lyapunov_constants(p);
    if (!(k2.m1 > 0.0 && k2.m2 > 0.0)) ++violations;
  }
  const LyapunovConstants w = lyapunov_constants(SystemParams{0.5, 1.0, 0.01, 1.0});
  const bool witness_ok = std::abs(w.m1 - 23.49) <= 1e-9 && std::abs(w.m2 - 24.0) <= 1e-9;
  return {violations == 0 && witness_ok,
          std::to_string(admissible) + " admissible tuples, " + std::to_string(violations) +
              " violations; witness m1=" + fmt(w.m1) + " m2=" + fmt(w.m2)};
}

// 2. catalog proxes agree with the exhaustive oracle; nonexpansiveness
Outcome criterion_prox_equivalence() {
  Rng rng(77001);
  const double lam = 0.8;
  const double gammas[3] = {0.05, 0.3, 1.0};
  double worst_ratio = 0.0;  // error / (2*step)
  for (int dim = 1; dim <= 2; ++dim) {
    const double step = dim == 1 ? 1e-4 : 1e-3;
    const double tol = 2.0 * step;
    const Vector lo = Vector::Constant(dim, -0.07);
    const Vector hi = Vector::Constant(dim, 0.09);
    for (int k = 0; k < 100; ++k) {
      const double gamma = gammas[k % 3];
      const Vector v = random_vec(rng, dim, -0.12, 0.12);
      const GridSpec grid{step, 0.0};

      Vector ref;
      if (dim == 1) {
        ref = brute_force_prox([&](const Vector& u) { return lam * std::abs(u[0]); }, gamma, v,
                               grid);
      } else {
        ref = brute_force_prox(
            [&](const Vector& u) { return lam * (std::abs(u[0]) + std::abs(u[1])); }, gamma, v,
            grid);
      }
      worst_ratio =
          std::max(worst_ratio, (ref - prox_soft_threshold(gamma, lam, v)).norm() / tol);

      if (dim == 1) {
        ref = brute_force_prox(
            [&](const Vector& u) { return (u[0] < lo[0] || u[0] > hi[0]) ? kInfinity : 0.0; },
            gamma, v, grid);
      } else {
        ref = brute_force_prox(
            [&](const Vector& u) {
              return (u[0] < lo[0] || u[0] > hi[0] || u[1] < lo[1] || u[1] > hi[1]) ? kInfinity
                                                                                    : 0.0;
            },
            gamma, v, grid);
      }
      worst_ratio =
          std::max(worst_ratio, (ref - prox_box_projection(gamma, lo, hi, v)).norm() / tol);

      ref = brute_force_prox([](const Vector&) { return 0.0; }, gamma, v, grid);
      worst_ratio = std::max(worst_ratio, (ref - v).norm() / tol);
    }
  }

  Rng rng2(77002);
  double worst_nonexp = -kInfinity;
  for (const auto& p : catalog()) {
    worst_nonexp = std::max(
        worst_nonexp, nonexpansiveness_violation(p.nonsmooth, rng2, 1000, {0.01, 0.1, 1.0}));
  }
  const bool pass = worst_ratio <= 1.0 && worst_nonexp <= 1e-12;
  return {pass, "worst oracle error " + fmt(worst_ratio) + "x tolerance, nonexpansiveness slack " +
                    fmt(worst_nonexp)};
}

struct TrajectoryBatch {
  std::vector<Trajectory> trajectories;
};

const TrajectoryBatch& catalog_batch() {
  static TrajectoryBatch batch = [] {
    TrajectoryBatch b;
    Rng rng(90210);
    for (const auto& problem : catalog()) {
      const SystemParams params = admissible_params_for(problem.smooth.lipschitz);
      const double box = problem.name == "quartic" ? 1.0 : 1.5;
      for (int start = 0; start < 3; ++start) {
        const Vector x0 = random_vec(rng, problem.dim(), -box, box);
        const Vector y0 = random_vec(rng, problem.dim(), -box, box);
        IntegrateOptions opts;
        opts.t_max = 10.0;
        b.trajectories.push_back(integrate(problem, params, x0, y0, opts));
      }
    }
    return b;
  }();
  return batch;
}

// 3. energy decrease along all catalog trajectories
Outcome criterion_lyapunov_decrease() {
  double worst_jump_slack = -kInfinity;  // max_jump - eta_int
  double worst_int_slack = kInfinity;    // slack >= 0 required
  bool pass = true;
  for (const auto& traj : catalog_batch().trajectories) {
    const DecreaseReport rep = check_decrease(traj);
    pass = pass && rep.ok();
    worst_jump_slack = std::max(worst_jump_slack, rep.max_jump - rep.eta_int);
    worst_int_slack = std::min(worst_int_slack, rep.slack);
  }
  return {pass, "worst jump slack " + fmt(worst_jump_slack) + ", worst integral slack " +
                    fmt(worst_int_slack)};
}

// 4. subgradient bound along the same trajectories
Outcome criterion_zeta_bound() {
  double worst = -kInfinity;
  bool pass = true;
  for (const auto& traj : catalog_batch().trajectories) {
    const ZetaReport rep = zeta_bound_check(traj);
    pass = pass && rep.ok;
    worst = std::max(worst, rep.max_violation);
  }
  return {pass, "worst violation " + fmt(worst)};
}

// 5. convergence to critical points on the lasso problems
Outcome criterion_convergence() {
  std::string detail;
  bool pass = true;

  {
    Matrix q(1, 1);
    q << 1.0;
    Vector c(1);
    c << 2.0;
    Vector crit(1);
    crit << 1.0;
    const ProblemSpec lasso1 = make_lasso(q, c, 1.0, {crit});
    const SystemParams p{0.5, 1.0, 0.1, lasso1.smooth.lipschitz};
    Vector x0(1), y0(1);
    x0 << 3.0;
    y0 << 0.0;
    IntegrateOptions opts;
    opts.t_max = 600.0;
    const Trajectory traj = integrate(lasso1, p, x0, y0, opts);
    if (traj.stop_reason != StopReason::stationarity) {
      pass = false;
      detail += "1D did not reach stationarity; ";
    } else {
      const LimitReport lim = limit_report(traj);
      const double err = std::abs(lim.x_limit[0] - 1.0);
      pass = pass && err <= 1e-5 && lim.prox_residual_at_limit < 1e-5 &&
             lim.y_relation_error < 1e-5;
      detail += "1D |x-1|=" + fmt(err) + " residual=" + fmt(lim.prox_residual_at_limit) +
                " y_rel=" + fmt(lim.y_relation_error) + "; ";
    }
  }
  {
    Matrix q(2, 2);
    q << 2.0, 0.5, 0.5, 1.0;
    Vector c(2);
    c << 1.0, -1.0;
    const ProblemSpec lasso2 = make_lasso(q, c, 0.1);
    const SystemParams p = admissible_params_for(lasso2.smooth.lipschitz, 0.1);
    Vector x0(2), y0(2);
    x0 << 1.5, 1.0;
    y0 << 0.0, -0.5;
    IntegrateOptions opts;
    opts.t_max = 2000.0;
    const Trajectory traj = integrate(lasso2, p, x0, y0, opts);
    if (traj.stop_reason != StopReason::stationarity) {
      pass = false;
      detail += "2D did not reach stationarity";
    } else {
      const LimitReport lim = limit_report(traj);
      pass = pass && lim.prox_residual_at_limit < 1e-5 && lim.y_relation_error < 1e-5;
      detail += "2D residual=" + fmt(lim.prox_residual_at_limit) +
                " y_rel=" + fmt(lim.y_relation_error);
    }
  }
  return {pass, detail};
}

// 6. first-order form vs the second-order form with a = lambda - 1/gamma
Outcome criterion_second_order_equivalence() {
  Matrix q(2, 2);
  q << 2.0, 0.5, 0.5, 1.0;
  Vector c(2);
  c << 1.0, -1.0;
  const ProblemSpec quad = make_quadratic(q, c);
  const double lambda = 1.5, gamma = 1.0;
  const SystemParams params{lambda - 1.0 / gamma, 1.0 / gamma, gamma, quad.smooth.lipschitz};
  Vector x0(2), y0(2);
  x0 << 0.7, -0.3;
  y0 << 0.25, 0.4;
  IntegrateOptions opts;
  opts.dt = 1e-3;
  opts.t_max = 10.0;
  opts.stop_tol = 0.0;
  opts.skip_param_check = true;
  opts.sample_stride = 1;
  const Trajectory first = integrate(quad, params, x0, y0, opts);
  const Vector v0 = rhs(quad, params, x0, y0).xdot;
  const SecondOrderTrajectory second =
      integrate_second_order(quad.smooth, lambda, gamma, x0, v0, 1e-3, 10.0);
  double worst = kInfinity;
  if (first.samples.size() == second.x.size()) {
    worst = 0.0;
    for (std::size_t k = 0; k < second.x.size(); ++k) {
      worst = std::max(worst, (first.samples[k].state.x - second.x[k]).norm());
    }
  }
  return {worst < 1e-6, "max |x_first - x_second| = " + fmt(worst)};
}

// 7. rate regimes: exponential on the quadratic, polynomial on synthetic data,
//    exact round trip of the exponent map
Outcome criterion_rate_regimes() {
  bool pass = true;
  std::string detail;

  {
    const Matrix q = Matrix::Identity(2, 2);
    Vector c(2);
    c << 1.0, -1.0;
    const ProblemSpec quad = make_quadratic(q, c);
    const SystemParams p{0.5, 1.0, 0.1, quad.smooth.lipschitz};
    const int n = quad.dim();
    Matrix A(2 * n, 2 * n);
    A.topLeftCorner(n, n) = -(p.gamma * q + p.a * Matrix::Identity(n, n));
    A.topRightCorner(n, n) = -p.b * Matrix::Identity(n, n);
    A.bottomLeftCorner(n, n) = -p.a * Matrix::Identity(n, n);
    A.bottomRightCorner(n, n) = -p.b * Matrix::Identity(n, n);
    const Eigen::EigenSolver<Matrix> es(A);
    double max_re = -kInfinity;
    for (int i = 0; i < 2 * n; ++i) max_re = std::max(max_re, es.eigenvalues()[i].real());
    const double eig_rate = -max_re;

    Vector x0(2), y0(2);
    x0 << 1.3, -0.7;
    y0 << 0.4, 0.9;
    IntegrateOptions opts;
    opts.t_max = 1500.0;
    opts.sample_stride = 10;
    const Trajectory traj = integrate(quad, p, x0, y0, opts);
    if (traj.stop_reason != StopReason::stationarity) {
      pass = false;
      detail += "quadratic run not stationary; ";
    } else {
      const RateReport rep = classify_rate(decay_signal(traj, limit_report(traj)));
      const double rel = std::abs(rep.fit_b - eig_rate) / eig_rate;
      pass = pass && rep.regime == RateRegime::exponential && rel <= 0.05;
      detail += std::string("quadratic: ") + to_string(rep.regime) + " b1=" + fmt(rep.fit_b) +
                " eig=" + fmt(eig_rate) + " rel=" + fmt(rel) + "; ";
    }
  }
  {
    Rng rng(424242);
    std::vector<double> t(2001), d(2001);
    for (int k = 0; k <= 2000; ++k) {
      t[k] = static_cast<double>(k);
      d[k] = std::pow(1.0 + t[k], -0.5) * (1.0 + 0.01 * rng.uniform(-1.0, 1.0));
    }
    const RateReport rep = classify_rate(make_synthetic_signal(t, d, 1e-9));
    const bool poly_ok = rep.regime == RateRegime::polynomial && rep.theta_hat &&
                         std::abs(*rep.theta_hat - 0.75) <= 0.05;
    pass = pass && poly_ok;
    detail += std::string("synthetic: ") + to_string(rep.regime) +
              " theta=" + (rep.theta_hat ? fmt(*rep.theta_hat) : "none") + "; ";
  }
  {
    double worst = 0.0;
    for (double theta = 0.505; theta < 0.999; theta += 0.005) {
      const double s = polynomial_slope_from_theta(theta);
      worst = std::max(worst, std::abs(theta_from_polynomial_slope(s) - theta));
    }
    pass = pass && worst <= 1e-12;
    detail += "round-trip err " + fmt(worst);
  }
  return {pass, detail};
}

// 8. fourth-order convergence of the integrator on the linear problem
Outcome criterion_integrator_order() {
  Matrix q(1, 1);
  q << 1.0;
  const ProblemSpec quad = make_quadratic(q, Vector::Zero(1));
  const SystemParams p{0.5, 1.0, 0.1, quad.smooth.lipschitz};
  Vector x0(1), y0(1);
  x0 << 1.0;
  y0 << 0.5;
  const auto terminal = [&](double dt) {
    IntegrateOptions opts;
    opts.dt = dt;
    opts.t_max = 2.0;
    opts.stop_tol = 0.0;
    opts.sample_stride = 1 << 20;  // initial + final only
    const Trajectory traj = integrate(quad, p, x0, y0, opts);
    const auto& last = traj.samples.back().state;
    return std::make_pair(last.x, last.y);
  };
  const auto ref = terminal(0.00125);
  const auto coarse = terminal(0.02);
  const auto fine = terminal(0.01);
  const double err_coarse =
      (coarse.first - ref.first).norm() + (coarse.second - ref.second).norm();
  const double err_fine = (fine.first - ref.first).norm() + (fine.second - ref.second).norm();
  const double factor = err_coarse / err_fine;
  return {factor >= 12.0, "error(dt)/error(dt/2) = " + fmt(factor) + " (err " + fmt(err_coarse) +
                              " -> " + fmt(err_fine) + ")"};
}

// 9. byte-identical trajectory.csv for identical config + seed
Outcome criterion_determinism() {
  const json cfg_json = {
      {"problem", {{"name", "lasso-like"}, {"dim", 1}, {"q", {1.0}}, {"c", {2.0}}, {"lambda", 1.0}}},
      {"params", {{"a", 0.5}, {"b", 1.0}, {"gamma", 0.1}}},
      {"initial", {{"random", 424242}}},
      {"integration", {{"t_max", 200.0}, {"stop_tol", 1e-8}, {"sample_stride", 20}}},
      {"outputs", {{"directory", "acceptance_out"}}}};
  const ExperimentConfig cfg = parse_config(cfg_json);
  const auto read_all = [](const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  run_experiment(cfg, "acceptance_out/run_a");
  run_experiment(cfg, "acceptance_out/run_b");
  const std::string a = read_all("acceptance_out/run_a/trajectory.csv");
  const std::string b = read_all("acceptance_out/run_b/trajectory.csv");
  const bool pass = !a.empty() && a == b;
  return {pass, pass ? "identical (" + std::to_string(a.size()) + " bytes)" : "files differ"};
}

}  // namespace

int main() {
  struct Criterion {
    int index;
    const char* name;
    std::function<Outcome()> fn;
  };
  const std::vector<Criterion> criteria = {
      {1, "parameter implication", criterion_parameter_implication},
      {2, "prox oracle equivalence", criterion_prox_equivalence},
      {3, "lyapunov decrease", criterion_lyapunov_decrease},
      {4, "subgradient bound", criterion_zeta_bound},
      {5, "convergence to critical points", criterion_convergence},
      {6, "first/second-order equivalence", criterion_second_order_equivalence},
      {7, "rate regimes", criterion_rate_regimes},
      {8, "integrator order", criterion_integrator_order},
      {9, "determinism", criterion_determinism},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.fn();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] criterion %d: %s | %s (%.2fs)\n", outcome.pass ? "PASS" : "FAIL", c.index,
                c.name, outcome.detail.c_str(), secs);
    if (!outcome.pass) ++failures;
  }
  if (failures == 0) {
    std::printf("all %zu criteria passed\n", criteria.size());
  } else {
    std::printf("%d criteria FAILED\n", failures);
  }
  return failures == 0 ? 0 : 1;
}
