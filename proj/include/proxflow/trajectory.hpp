#pragma once

#include <string>
#include <vector>

#include "proxflow/problem.hpp"
#include "proxflow/system_params.hpp"

namespace proxflow {

enum class StopReason { time_limit, stationarity, divergence };

inline const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::time_limit: return "time-limit";
    case StopReason::stationarity: return "stationarity";
    case StopReason::divergence: return "divergence";
  }
  return "unknown";
}

struct State {
  double t = 0.0;
  Vector x, y;
};

/// Right-hand side evaluation at a state: the prox output z, xdot = z - x and
/// ydot = -(a x + b y).
struct DerivedState {
  Vector z, xdot, ydot;
};

/// Per-sample scalars recorded along a trajectory. prox_residual is
/// ||x - prox(gamma, x - gamma*grad(x))|| / gamma, the computable surrogate
/// for criticality; zeta_bound is c1*||xdot|| + c2*||ydot||.
struct DiagnosticsRecord {
  double h_value = 0.0;
  double prox_residual = 0.0;
  double xdot_norm = 0.0;
  double ydot_norm = 0.0;
  double axby_norm = 0.0;
  double zeta_bound = 0.0;
};

struct TrajectorySample {
  State state;
  DerivedState derived;
  DiagnosticsRecord diag;
};

/// Time-ordered samples plus the run context. Sample times increase strictly
/// and are uniformly spaced except possibly the final one.
struct Trajectory {
  std::vector<TrajectorySample> samples;
  SystemParams params;
  ProblemSpec problem;
  StopReason stop_reason = StopReason::time_limit;
  double dt = 0.0;
  double t_max = 0.0;
  double stop_tol = 0.0;
  int sample_stride = 1;
};

}  // namespace proxflow
