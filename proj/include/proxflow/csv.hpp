#pragma once

#include <cstdio>
#include <ostream>
#include <string>

#include "proxflow/rate.hpp"
#include "proxflow/trajectory.hpp"

namespace proxflow {

/// Shortest 17-significant-digit form; round-trips doubles exactly.
inline void append_number(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

/// Columns: t, x_0..x_{n-1}, y_0..y_{n-1}, xdot_norm, ydot_norm, axby_norm,
/// H, prox_residual.
inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  const int n = traj.problem.dim();
  std::string line = "t";
  for (int i = 0; i < n; ++i) line += ",x_" + std::to_string(i);
  for (int i = 0; i < n; ++i) line += ",y_" + std::to_string(i);
  line += ",xdot_norm,ydot_norm,axby_norm,H,prox_residual\n";
  os << line;
  for (const auto& s : traj.samples) {
    line.clear();
    append_number(line, s.state.t);
    for (int i = 0; i < n; ++i) {
      line += ',';
      append_number(line, s.state.x[i]);
    }
    for (int i = 0; i < n; ++i) {
      line += ',';
      append_number(line, s.state.y[i]);
    }
    for (double v : {s.diag.xdot_norm, s.diag.ydot_norm, s.diag.axby_norm, s.diag.h_value,
                     s.diag.prox_residual}) {
      line += ',';
      append_number(line, v);
    }
    line += '\n';
    os << line;
  }
}

/// Columns: t, d, sigma. A null signal produces a header-only file.
inline void write_decay_csv(std::ostream& os, const DecaySignal* sig) {
  os << "t,d,sigma\n";
  if (sig == nullptr) return;
  std::string line;
  for (std::size_t k = 0; k < sig->times.size(); ++k) {
    line.clear();
    append_number(line, sig->times[k]);
    line += ',';
    append_number(line, sig->values[k]);
    line += ',';
    append_number(line, sig->sigma[k]);
    line += '\n';
    os << line;
  }
}

struct SweepRow {
  double a = 0.0;
  double b = 0.0;
  double gamma = 0.0;
  bool feasible = false;
  double m1 = 0.0;
  double m2 = 0.0;
  std::string regime;  // empty when no integration was run for the cell
};

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "a,b,gamma,feasible,m1,m2,regime\n";
  std::string line;
  for (const auto& r : rows) {
    line.clear();
    append_number(line, r.a);
    line += ',';
    append_number(line, r.b);
    line += ',';
    append_number(line, r.gamma);
    line += r.feasible ? ",1," : ",0,";
    append_number(line, r.m1);
    line += ',';
    append_number(line, r.m2);
    line += ',';
    line += r.regime;
    line += '\n';
    os << line;
  }
}

}  // namespace proxflow
