#pragma once

#include <cmath>

#include "proxflow/trajectory.hpp"

namespace proxflow {

/// Regularized energy at a sample, with u = z, v = x, w = y:
///   H = (f + Phi)(z) + ||xdot||^2 / (2*gamma) + ||a*x + b*y||^2 / (2*gamma*a).
/// Returns +infinity only if the prox output left dom f, which indicates a
/// broken prox.
inline double h_value(const ProblemSpec& problem, const SystemParams& p, const State& s,
                      const DerivedState& d) {
  const double fz = problem.nonsmooth.value(d.z);
  const double phiz = problem.smooth.value(d.z);
  const Vector axby = p.a * s.x + p.b * s.y;
  return fz + phiz + d.xdot.squaredNorm() / (2.0 * p.gamma) +
         axby.squaredNorm() / (2.0 * p.gamma * p.a);
}

/// ||x - prox(gamma, x - gamma*grad(x))|| / gamma. Zero exactly at critical
/// points of f + Phi.
inline double prox_residual(const ProblemSpec& problem, const SystemParams& p, const Vector& x) {
  const Vector g = problem.smooth.gradient(x);
  const Vector px = problem.nonsmooth.prox(p.gamma, x - p.gamma * g);
  return (x - px).norm() / p.gamma;
}

inline DiagnosticsRecord make_diagnostics(const ProblemSpec& problem, const SystemParams& p,
                                          const LyapunovConstants& k, const State& s,
                                          const DerivedState& d) {
  DiagnosticsRecord r;
  r.xdot_norm = d.xdot.norm();
  r.ydot_norm = d.ydot.norm();
  r.axby_norm = (p.a * s.x + p.b * s.y).norm();
  r.h_value = h_value(problem, p, s, d);
  r.prox_residual = prox_residual(problem, p, s.x);
  r.zeta_bound = k.c1 * r.xdot_norm + k.c2 * r.ydot_norm;
  return r;
}

/// Two-tier decrease check over a sampled trajectory. Pointwise: the largest
/// positive jump of H between consecutive samples must stay below
/// eta_int = 10 * dt^4 * (1 + max|H|). Integrated:
/// H(T) - H(0) <= -0.9 * trapz(m1*||xdot||^2 + m2*||ydot||^2); the 0.9
/// absorbs quadrature error of the discrete samples.
struct DecreaseReport {
  double max_jump = 0.0;
  double eta_int = 0.0;
  bool jumps_ok = false;
  double total_change = 0.0;
  double dissipation = 0.0;
  double slack = 0.0;  // -0.9*dissipation - total_change, >= 0 iff integral_ok
  bool integral_ok = false;

  bool ok() const { return jumps_ok && integral_ok; }
};

inline DecreaseReport check_decrease(const Trajectory& traj) {
  if (traj.samples.size() < 2) {
    throw InsufficientDataError("decrease check needs at least 2 samples");
  }
  const LyapunovConstants k = lyapunov_constants(traj.params);
  DecreaseReport rep;
  double max_abs_h = 0.0;
  double dissipation = 0.0;
  double max_jump = -kInfinity;
  for (std::size_t i = 0; i + 1 < traj.samples.size(); ++i) {
    const auto& s0 = traj.samples[i];
    const auto& s1 = traj.samples[i + 1];
    max_jump = std::max(max_jump, s1.diag.h_value - s0.diag.h_value);
    const double g0 = k.m1 * s0.diag.xdot_norm * s0.diag.xdot_norm +
                      k.m2 * s0.diag.ydot_norm * s0.diag.ydot_norm;
    const double g1 = k.m1 * s1.diag.xdot_norm * s1.diag.xdot_norm +
                      k.m2 * s1.diag.ydot_norm * s1.diag.ydot_norm;
    dissipation += 0.5 * (g0 + g1) * (s1.state.t - s0.state.t);
    max_abs_h = std::max(max_abs_h, std::abs(s0.diag.h_value));
  }
  max_abs_h = std::max(max_abs_h, std::abs(traj.samples.back().diag.h_value));

  rep.max_jump = max_jump;
  rep.eta_int = 10.0 * std::pow(traj.dt, 4) * (1.0 + max_abs_h);
  rep.jumps_ok = max_jump <= rep.eta_int;
  rep.total_change = traj.samples.back().diag.h_value - traj.samples.front().diag.h_value;
  rep.dissipation = dissipation;
  rep.slack = -0.9 * dissipation - rep.total_change;
  rep.integral_ok = rep.slack >= 0.0;
  return rep;
}

/// Verifies the explicit subgradient
///   zeta = (grad Phi(z) - grad Phi(x) + ydot/gamma,
///           -xdot/gamma - ydot/gamma,
///           -(b/(gamma*a)) * ydot)
/// against the bound ||zeta|| <= c1*||xdot|| + c2*||ydot|| + 1e-12 at every
/// sample.
struct ZetaReport {
  bool ok = true;
  double max_violation = -kInfinity;  // max over samples of ||zeta|| - bound
  double worst_t = 0.0;
};

inline ZetaReport zeta_bound_check(const Trajectory& traj) {
  const SystemParams& p = traj.params;
  const LyapunovConstants k = lyapunov_constants(p);
  ZetaReport rep;
  for (const auto& s : traj.samples) {
    const Vector gx = traj.problem.smooth.gradient(s.state.x);
    const Vector gz = traj.problem.smooth.gradient(s.derived.z);
    const Vector zeta1 = gz - gx + s.derived.ydot / p.gamma;
    const Vector zeta2 = -(s.derived.xdot + s.derived.ydot) / p.gamma;
    const Vector zeta3 = -(p.b / (p.gamma * p.a)) * s.derived.ydot;
    const double norm_zeta =
        std::sqrt(zeta1.squaredNorm() + zeta2.squaredNorm() + zeta3.squaredNorm());
    const double bound = k.c1 * s.diag.xdot_norm + k.c2 * s.diag.ydot_norm + 1e-12;
    const double violation = norm_zeta - bound;
    if (violation > rep.max_violation) {
      rep.max_violation = violation;
      rep.worst_t = s.state.t;
    }
    if (violation > 0.0) rep.ok = false;
  }
  return rep;
}

/// Terminal point of a stationary trajectory together with fresh criticality
/// measurements: the prox residual at the limit and the error in the relation
/// y = -(a/b) x.
struct LimitReport {
  Vector x_limit, y_limit;
  double prox_residual_at_limit = 0.0;
  double y_relation_error = 0.0;
  double h_at_limit = 0.0;
};

inline LimitReport limit_report(const Trajectory& traj) {
  if (traj.stop_reason != StopReason::stationarity) {
    throw NotConvergedError("limit report requires a trajectory stopped by stationarity");
  }
  const auto& last = traj.samples.back();
  LimitReport rep;
  rep.x_limit = last.state.x;
  rep.y_limit = last.state.y;
  rep.prox_residual_at_limit = prox_residual(traj.problem, traj.params, rep.x_limit);
  rep.y_relation_error = (rep.y_limit + (traj.params.a / traj.params.b) * rep.x_limit).norm();
  rep.h_at_limit = last.diag.h_value;
  return rep;
}

}  // namespace proxflow
