#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "proxflow/problem.hpp"
#include "proxflow/rng.hpp"

namespace proxflow {

/// Sampling validators shared by the test suite and the self-verification
/// command. Each returns the worst observed slack; negative or tiny values
/// mean the property held.

/// Central-difference check of the gradient at random points; returns the
/// worst relative error ||g_fd - g|| / max(1, ||g||).
inline double gradient_fd_error(const SmoothOracle& s, Rng& rng, int points, double box = 1.5) {
  double worst = 0.0;
  for (int k = 0; k < points; ++k) {
    Vector x(s.dim);
    for (int i = 0; i < s.dim; ++i) x[i] = rng.uniform(-box, box);
    const Vector g = s.gradient(x);
    Vector g_fd(s.dim);
    for (int i = 0; i < s.dim; ++i) {
      const double h = 1e-5 * std::max(1.0, std::abs(x[i]));
      Vector xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      g_fd[i] = (s.value(xp) - s.value(xm)) / (2.0 * h);
    }
    worst = std::max(worst, (g_fd - g).norm() / std::max(1.0, g.norm()));
  }
  return worst;
}

/// Worst violation of ||g(x) - g(y)|| <= L ||x - y|| over random pairs
/// (positive values break the declared modulus).
inline double lipschitz_violation(const SmoothOracle& s, Rng& rng, int pairs, double box = 1.5) {
  double worst = -kInfinity;
  for (int k = 0; k < pairs; ++k) {
    Vector x(s.dim), y(s.dim);
    for (int i = 0; i < s.dim; ++i) {
      x[i] = rng.uniform(-box, box);
      y[i] = rng.uniform(-box, box);
    }
    const double lhs = (s.gradient(x) - s.gradient(y)).norm();
    const double rhs = s.lipschitz * (x - y).norm();
    worst = std::max(worst, lhs - rhs * (1.0 + 1e-9) - 1e-12);
  }
  return worst;
}

/// Worst violation of ||prox(u) - prox(v)|| <= ||u - v|| over random pairs.
inline double nonexpansiveness_violation(const NonsmoothOracle& f, Rng& rng, int pairs,
                                         const std::vector<double>& gammas, double box = 2.0) {
  double worst = -kInfinity;
  for (double gamma : gammas) {
    for (int k = 0; k < pairs; ++k) {
      Vector u(f.dim), v(f.dim);
      for (int i = 0; i < f.dim; ++i) {
        u[i] = rng.uniform(-box, box);
        v[i] = rng.uniform(-box, box);
      }
      const double lhs = (f.prox(gamma, u) - f.prox(gamma, v)).norm();
      worst = std::max(worst, lhs - (u - v).norm());
    }
  }
  return worst;
}

/// Worst violation of the subgradient inequality at prox outputs: with
/// p = prox(gamma, v), the vector (v - p)/gamma must satisfy
/// f(w) >= f(p) + <(v-p)/gamma, w - p> at random probes w.
inline double prox_subgradient_violation(const NonsmoothOracle& f, Rng& rng, int pairs,
                                         double gamma, double box = 2.0) {
  double worst = -kInfinity;
  for (int k = 0; k < pairs; ++k) {
    Vector v(f.dim), w(f.dim);
    for (int i = 0; i < f.dim; ++i) {
      v[i] = rng.uniform(-box, box);
      w[i] = rng.uniform(-box, box);
    }
    const Vector p = f.prox(gamma, v);
    const double fw = f.value(w);
    if (fw == kInfinity) continue;  // inequality holds trivially
    const double fp = f.value(p);
    const double rhs = fp + (v - p).dot(w - p) / gamma;
    worst = std::max(worst, rhs - fw);
  }
  return worst;
}

}  // namespace proxflow
