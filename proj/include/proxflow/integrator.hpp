#pragma once

#include <algorithm>
#include <cmath>
#include <iostream>
#include <utility>

#include "proxflow/lyapunov.hpp"
#include "proxflow/trajectory.hpp"

namespace proxflow {

/// One right-hand-side evaluation:
///   z    = prox(gamma, x - gamma*grad(x) - a*x - b*y)
///   xdot = z - x
///   ydot = -(a*x + b*y)
/// Exactly one prox and one gradient evaluation per call.
inline DerivedState rhs(const ProblemSpec& problem, const SystemParams& p, const Vector& x,
                        const Vector& y) {
  if (x.size() != problem.dim() || y.size() != problem.dim()) {
    throw DimensionMismatchError("state dimension does not match the problem");
  }
  const Vector g = problem.smooth.gradient(x);
  if (!g.allFinite()) throw DivergenceError("gradient oracle returned non-finite values", x, y);
  DerivedState d;
  d.z = problem.nonsmooth.prox(p.gamma, x - p.gamma * g - p.a * x - p.b * y);
  if (!d.z.allFinite()) throw DivergenceError("prox oracle returned non-finite values", x, y);
  d.xdot = d.z - x;
  d.ydot = -(p.a * x + p.b * y);
  return d;
}

struct IntegrateOptions {
  double dt = 0.0;  // <= 0 selects min(gamma, 1/(1+L)) / 20
  double t_max = 10.0;
  double stop_tol = 1e-8;  // 0 disables the stationarity stop
  int sample_stride = 1;
  bool skip_param_check = false;
};

inline double default_dt(const SystemParams& p) {
  return std::min(p.gamma, 1.0 / (1.0 + p.lipschitz)) / 20.0;
}

/// Classical 4-stage Runge-Kutta with fixed step on the coupled field.
/// The prox is evaluated at every stage point (4 prox calls per step).
/// Stops at t_max, earlier when ||xdot|| + ||ydot|| < stop_tol, or on
/// divergence (non-finite values or ||x|| + ||y|| > 1e12), in which case the
/// partial trajectory is returned.
inline Trajectory integrate(const ProblemSpec& problem, const SystemParams& params,
                            const Vector& x0, const Vector& y0, const IntegrateOptions& opts) {
  params.validate();
  if (x0.size() != problem.dim() || y0.size() != problem.dim()) {
    throw DimensionMismatchError("initial state dimension does not match the problem");
  }
  if (!(opts.t_max >= 0.0) || !std::isfinite(opts.t_max)) {
    throw InvalidParameterError("t_max must be a nonnegative finite real");
  }
  if (!(opts.stop_tol >= 0.0)) throw InvalidParameterError("stop_tol must be nonnegative");
  if (!opts.skip_param_check) {
    const FeasibilityReport rep = check_conditions(params);
    if (!rep.admissible()) {
      throw InvalidParameterError(
          "parameter admissibility condition failed: "
          "2gL(|1-a|+gL)+|1-a|+gL+bgL < 1 has margin " +
          std::to_string(rep.first_margin) + ", ab+a/2+a|1-a|/2+gaL/2+gabL/2 < b has margin " +
          std::to_string(rep.second_margin) + " (override to run anyway)");
    }
  }

  const double dt = opts.dt > 0.0 ? opts.dt : default_dt(params);
  if (dt > params.gamma / 10.0) {
    std::cerr << "warning: dt = " << dt << " exceeds the recommended gamma/10 = "
              << params.gamma / 10.0 << "\n";
  }
  const int stride = std::max(1, opts.sample_stride);
  const LyapunovConstants lyap = lyapunov_constants(params);

  Trajectory traj;
  traj.params = params;
  traj.problem = problem;
  traj.dt = dt;
  traj.t_max = opts.t_max;
  traj.stop_tol = opts.stop_tol;
  traj.sample_stride = stride;

  Vector x = x0;
  Vector y = y0;
  double t = 0.0;
  long step = 0;

  const auto push = [&](const DerivedState& d) {
    TrajectorySample s;
    s.state = State{t, x, y};
    s.derived = d;
    s.diag = make_diagnostics(problem, params, lyap, s.state, s.derived);
    traj.samples.push_back(std::move(s));
  };

  try {
    for (;;) {
      const DerivedState cur = rhs(problem, params, x, y);
      bool pushed = false;
      if (step % stride == 0) {
        push(cur);
        pushed = true;
      }
      if (opts.stop_tol > 0.0 && cur.xdot.norm() + cur.ydot.norm() < opts.stop_tol) {
        if (!pushed) push(cur);
        traj.stop_reason = StopReason::stationarity;
        return traj;
      }
      const double h = std::min(dt, opts.t_max - t);
      if (h <= 0.0) {
        if (!pushed) push(cur);
        traj.stop_reason = StopReason::time_limit;
        return traj;
      }

      const DerivedState k2 =
          rhs(problem, params, x + (0.5 * h) * cur.xdot, y + (0.5 * h) * cur.ydot);
      const DerivedState k3 =
          rhs(problem, params, x + (0.5 * h) * k2.xdot, y + (0.5 * h) * k2.ydot);
      const DerivedState k4 = rhs(problem, params, x + h * k3.xdot, y + h * k3.ydot);
      x += (h / 6.0) * (cur.xdot + 2.0 * k2.xdot + 2.0 * k3.xdot + k4.xdot);
      y += (h / 6.0) * (cur.ydot + 2.0 * k2.ydot + 2.0 * k3.ydot + k4.ydot);
      ++step;
      // full steps land on the exact multiples of dt; only the final clipped
      // step leaves the grid, and it ends exactly at t_max
      t = h == dt ? static_cast<double>(step) * dt : opts.t_max;

      if (!x.allFinite() || !y.allFinite() || x.norm() + y.norm() > 1e12) {
        std::cerr << "divergence detected at t = " << t << "\n";
        traj.stop_reason = StopReason::divergence;
        return traj;
      }
    }
  } catch (const DivergenceError& e) {
    std::cerr << "divergence detected at t = " << t << ": " << e.what() << "\n";
    traj.stop_reason = StopReason::divergence;
    return traj;
  }
}

/// Samples of the second-order form: positions and velocities only.
struct SecondOrderTrajectory {
  std::vector<double> t;
  std::vector<Vector> x;
  std::vector<Vector> v;
  StopReason stop_reason = StopReason::time_limit;
};

/// Integrates  xddot + lambda*xdot + gamma*HessPhi(x)*xdot + grad Phi(x) = 0
/// as a first-order system in (x, v) with the same fixed-step scheme. Used as
/// a cross-check against `integrate` with f = 0, a = lambda - 1/gamma and
/// b = 1/gamma, and matched initial conditions.
inline SecondOrderTrajectory integrate_second_order(const SmoothOracle& phi, double lambda,
                                                    double gamma, const Vector& x0,
                                                    const Vector& v0, double dt, double t_max) {
  if (!(gamma > 0.0)) throw InvalidParameterError("gamma must be positive");
  if (!(dt > 0.0)) throw InvalidParameterError("dt must be positive");
  if (!(t_max >= 0.0)) throw InvalidParameterError("t_max must be nonnegative");
  if (x0.size() != phi.dim || v0.size() != phi.dim) {
    throw DimensionMismatchError("initial state dimension does not match the oracle");
  }

  const auto accel = [&](const Vector& x, const Vector& v) -> Vector {
    Vector a = -lambda * v - gamma * phi.hessian_vec_or_fd(x, v) - phi.gradient(x);
    if (!a.allFinite()) throw DivergenceError("second-order field is non-finite", x, v);
    return a;
  };

  SecondOrderTrajectory traj;
  Vector x = x0;
  Vector v = v0;
  double t = 0.0;
  long steps = 0;
  const auto push = [&]() {
    traj.t.push_back(t);
    traj.x.push_back(x);
    traj.v.push_back(v);
  };

  try {
    for (;;) {
      push();
      const double h = std::min(dt, t_max - t);
      if (h <= 0.0) {
        traj.stop_reason = StopReason::time_limit;
        return traj;
      }
      const Vector a1 = accel(x, v);
      const Vector x2 = x + (0.5 * h) * v, v2 = v + (0.5 * h) * a1;
      const Vector a2 = accel(x2, v2);
      const Vector x3 = x + (0.5 * h) * v2, v3 = v + (0.5 * h) * a2;
      const Vector a3 = accel(x3, v3);
      const Vector x4 = x + h * v3, v4 = v + h * a3;
      const Vector a4 = accel(x4, v4);
      const Vector vmid = v + 2.0 * v2 + 2.0 * v3 + v4;
      v += (h / 6.0) * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
      x += (h / 6.0) * vmid;
      ++steps;
      t = h == dt ? static_cast<double>(steps) * dt : t_max;
      if (!x.allFinite() || !v.allFinite() || x.norm() + v.norm() > 1e12) {
        traj.stop_reason = StopReason::divergence;
        return traj;
      }
    }
  } catch (const DivergenceError&) {
    traj.stop_reason = StopReason::divergence;
    return traj;
  }
}

}  // namespace proxflow
