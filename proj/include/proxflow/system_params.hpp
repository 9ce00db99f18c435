#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "proxflow/errors.hpp"

namespace proxflow {

/// Scalar constants of the dynamics: the gains (a, b), the prox step gamma,
/// and the Lipschitz modulus L of the smooth part's gradient.
struct SystemParams {
  double a = 0.0;
  double b = 0.0;
  double gamma = 0.0;
  double lipschitz = 0.0;

  void validate() const {
    if (!(a > 0.0) || !(b > 0.0) || !(gamma > 0.0) || !std::isfinite(a) || !std::isfinite(b) ||
        !std::isfinite(gamma)) {
      throw InvalidParameterError("a, b and gamma must be positive finite reals");
    }
    if (!(lipschitz >= 0.0) || !std::isfinite(lipschitz)) {
      throw InvalidParameterError("lipschitz must be a nonnegative finite real");
    }
  }
};

/// Constants of the energy decrease estimate and of the subgradient bound.
/// m1, m2 weight the dissipation in ||xdot||^2 and ||ydot||^2; c1, c2 bound
/// the subgradient norm by c1*||xdot|| + c2*||ydot||.
struct LyapunovConstants {
  double m1 = 0.0;
  double m2 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
};

/// Outcome of the two admissibility inequalities. Margins are signed
/// (right side minus left side), positive exactly when the inequality holds,
/// so callers can line-search on feasibility.
struct FeasibilityReport {
  bool first_holds = false;
  bool second_holds = false;
  double first_margin = 0.0;
  double second_margin = 0.0;

  bool admissible() const { return first_holds && second_holds; }
};

/// Evaluates the two parameter inequalities exactly as stated:
///   2*g*L*(|1-a| + g*L) + |1-a| + g*L + b*g*L < 1
///   a*b + a/2 + a*|1-a|/2 + g*a*L/2 + g*a*b*L/2 < b
inline FeasibilityReport check_conditions(const SystemParams& p) {
  p.validate();
  const double d = std::abs(1.0 - p.a);
  const double gl = p.gamma * p.lipschitz;
  const double lhs1 = 2.0 * gl * (d + gl) + d + gl + p.b * gl;
  const double lhs2 = p.a * p.b + 0.5 * p.a + 0.5 * p.a * d + 0.5 * p.gamma * p.a * p.lipschitz +
                      0.5 * p.gamma * p.a * p.b * p.lipschitz;
  FeasibilityReport rep;
  rep.first_margin = 1.0 - lhs1;
  rep.second_margin = p.b - lhs2;
  rep.first_holds = lhs1 < 1.0;
  rep.second_holds = lhs2 < p.b;
  return rep;
}

/// Derived constants:
///   m1 = 1/(2g) - L(|1-a| + gL) - |1-a|/(2g) - L/2 - bL/2
///   m2 = b/(ga) - b/g - 1/(2g) - |1-a|/(2g) - L/2 - bL/2
///   c1 = L + 1/g,  c2 = 2/g + b/(ga)
/// When check_conditions passes, m1 > 0 and m2 > 0 (divide the first
/// inequality by 2g and the second by ga).
inline LyapunovConstants lyapunov_constants(const SystemParams& p) {
  p.validate();
  const double d = std::abs(1.0 - p.a);
  const double g = p.gamma;
  const double L = p.lipschitz;
  LyapunovConstants k;
  k.m1 = 1.0 / (2.0 * g) - L * (d + g * L) - d / (2.0 * g) - 0.5 * L - 0.5 * p.b * L;
  k.m2 = p.b / (g * p.a) - p.b / g - 1.0 / (2.0 * g) - d / (2.0 * g) - 0.5 * L - 0.5 * p.b * L;
  k.c1 = L + 1.0 / g;
  k.c2 = 2.0 / g + p.b / (g * p.a);
  return k;
}

/// Result of the feasibility search. `params` is meaningful only when
/// `feasible` is true.
struct SuggestedParams {
  bool feasible = false;
  SystemParams params;
  double min_margin = -std::numeric_limits<double>::infinity();
};

/// Deterministic logarithmic grid search for an admissible (a, gamma) at the
/// given L and b: a over (0, 2), gamma over (0, 1/max(L,1)], 64 points per
/// axis by default. Returns the feasible grid point maximizing the smaller of
/// the two margins; reports infeasibility instead of throwing when no grid
/// point passes.
inline SuggestedParams suggest_params(double lipschitz, double b, int grid_points = 64) {
  if (!(lipschitz >= 0.0) || !std::isfinite(lipschitz)) {
    throw InvalidParameterError("lipschitz must be a nonnegative finite real");
  }
  if (!(b > 0.0) || !std::isfinite(b)) {
    throw InvalidParameterError("b must be a positive finite real");
  }
  if (grid_points < 2) throw InvalidParameterError("grid must have at least 2 points per axis");

  const double a_lo = 1e-4;
  const double a_hi = 1.99;
  const double g_hi = 1.0 / std::max(lipschitz, 1.0);
  const double g_lo = 1e-8 * g_hi;

  SuggestedParams best;
  for (int i = 0; i < grid_points; ++i) {
    const double fa = static_cast<double>(i) / (grid_points - 1);
    const double a = a_lo * std::pow(a_hi / a_lo, fa);
    for (int j = 0; j < grid_points; ++j) {
      const double fg = static_cast<double>(j) / (grid_points - 1);
      const double g = g_lo * std::pow(g_hi / g_lo, fg);
      const SystemParams p{a, b, g, lipschitz};
      const FeasibilityReport rep = check_conditions(p);
      if (!rep.admissible()) continue;
      const double mm = std::min(rep.first_margin, rep.second_margin);
      if (mm > best.min_margin) {
        best.feasible = true;
        best.params = p;
        best.min_margin = mm;
      }
    }
  }
  return best;
}

}  // namespace proxflow
