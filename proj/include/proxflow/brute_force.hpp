#pragma once

#include <cmath>
#include <utility>

#include "proxflow/problem.hpp"

namespace proxflow {

/// Grid for the exhaustive prox search. radius <= 0 selects the minimal
/// admissible half-width 2*||v|| + 1.
struct GridSpec {
  double step = 1e-4;
  double radius = 0.0;
};

/// Exhaustive grid minimizer of f(u) + ||u - v||^2 / (2*gamma) over the box
/// of half-width `radius` centered at v. Reference oracle for prox maps in
/// dims 1-2; accuracy is bounded by the grid step. The grid must cover a box
/// of radius at least 2*||v|| + 1 so the minimizer is interior.
template <typename FValue>
Vector brute_force_prox(FValue&& f_value, double gamma, const Vector& v, const GridSpec& grid) {
  const Eigen::Index n = v.size();
  if (n < 1 || n > 2) {
    throw UnsupportedDimensionError("brute_force_prox supports dimensions 1 and 2 only");
  }
  if (!(gamma > 0.0)) throw InvalidParameterError("brute_force_prox requires gamma > 0");
  if (!(grid.step > 0.0)) throw InvalidParameterError("grid step must be positive");

  const double min_radius = 2.0 * v.norm() + 1.0;
  const double radius = grid.radius > 0.0 ? grid.radius : min_radius;
  if (radius < min_radius * (1.0 - 1e-12)) {
    throw InvalidParameterError("grid must cover a box of radius >= 2*||v|| + 1 around v");
  }

  const long m = static_cast<long>(std::floor(2.0 * radius / grid.step)) + 1;
  const double inv2g = 0.5 / gamma;

  Vector u(n);
  Vector best(n);
  double best_val = kInfinity;

  if (n == 1) {
    const double base = v[0] - radius;
    for (long k = 0; k < m; ++k) {
      const double u0 = base + k * grid.step;
      u[0] = u0;
      const double r0 = u0 - v[0];
      const double val = f_value(u) + r0 * r0 * inv2g;
      if (val < best_val) {
        best_val = val;
        best[0] = u0;
      }
    }
  } else {
    const double base0 = v[0] - radius;
    const double base1 = v[1] - radius;
    for (long k0 = 0; k0 < m; ++k0) {
      const double u0 = base0 + k0 * grid.step;
      const double r0 = u0 - v[0];
      const double q0 = r0 * r0 * inv2g;
      u[0] = u0;
      for (long k1 = 0; k1 < m; ++k1) {
        const double u1 = base1 + k1 * grid.step;
        u[1] = u1;
        const double r1 = u1 - v[1];
        const double val = f_value(u) + q0 + r1 * r1 * inv2g;
        if (val < best_val) {
          best_val = val;
          best[0] = u0;
          best[1] = u1;
        }
      }
    }
  }

  if (!(best_val < kInfinity)) {
    throw InvalidProblemError("brute_force_prox: objective is +infinity on the whole grid");
  }
  return best;
}

}  // namespace proxflow
