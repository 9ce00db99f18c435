#pragma once

#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "proxflow/errors.hpp"

namespace proxflow {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Smooth part of the objective: value, gradient, a valid Lipschitz modulus
/// for the gradient, and optionally an exact Hessian-vector product.
struct SmoothOracle {
  int dim = 0;
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
  double lipschitz = 0.0;
  std::function<Vector(const Vector&, const Vector&)> hessian_vec;  // may be empty

  /// Hessian-vector product; falls back to central differences of the
  /// gradient with step 1e-6 when no exact product is available.
  Vector hessian_vec_or_fd(const Vector& x, const Vector& v) const {
    if (hessian_vec) return hessian_vec(x, v);
    const double h = 1e-6;
    return (gradient(x + h * v) - gradient(x - h * v)) / (2.0 * h);
  }
};

/// Nonsmooth convex part: extended-real value (indicator functions return
/// +infinity outside their domain) and a closed-form prox map (gamma, v).
struct NonsmoothOracle {
  int dim = 0;
  std::function<double(const Vector&)> value;
  std::function<Vector(double, const Vector&)> prox;
};

/// A composite objective f + Phi given through its two oracles.
struct ProblemSpec {
  std::string name;
  SmoothOracle smooth;
  NonsmoothOracle nonsmooth;
  std::vector<Vector> known_critical_points;
  bool coercive = false;

  int dim() const { return smooth.dim; }

  double objective(const Vector& x) const { return nonsmooth.value(x) + smooth.value(x); }
};

/// Componentwise soft threshold: prox of gamma * lambda * ||.||_1,
/// sign(v_i) * max(|v_i| - gamma*lambda, 0).
inline Vector prox_soft_threshold(double gamma, double lambda, const Vector& v) {
  if (!(gamma > 0.0) || !(lambda > 0.0)) {
    throw InvalidParameterError("soft threshold requires gamma > 0 and lambda > 0");
  }
  const double tau = gamma * lambda;
  Vector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double m = std::abs(v[i]) - tau;
    out[i] = m > 0.0 ? (v[i] > 0.0 ? m : -m) : 0.0;
  }
  return out;
}

/// Prox of the box indicator: componentwise clamp to [lo, hi]. The prox step
/// does not enter (indicator functions are scale invariant).
inline Vector prox_box_projection(double /*gamma*/, const Vector& lo, const Vector& hi,
                                  const Vector& v) {
  if (lo.size() != hi.size() || lo.size() != v.size()) {
    throw DimensionMismatchError("box bounds and input must share one dimension");
  }
  for (Eigen::Index i = 0; i < lo.size(); ++i) {
    if (lo[i] > hi[i]) throw InvalidProblemError("box has lo > hi in some component");
  }
  return v.cwiseMax(lo).cwiseMin(hi);
}

/// Prox of the zero function: identity.
inline Vector prox_zero(double /*gamma*/, const Vector& v) { return v; }

}  // namespace proxflow
