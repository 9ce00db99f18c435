#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "proxflow/problem.hpp"

namespace proxflow {

/// Largest eigenvalue of a symmetric positive definite matrix by power
/// iteration: at most 100 steps, stops when the Rayleigh quotient settles to
/// 1e-10.
inline double largest_eigenvalue(const Matrix& q) {
  const Eigen::Index n = q.rows();
  if (n == 0 || q.cols() != n) throw InvalidProblemError("matrix must be square and nonempty");
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = 1.0 + 0.01 * static_cast<double>(i);
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < 100; ++it) {
    Vector w = q * v;
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    v = w / norm;
    const double next = v.dot(q * v);
    if (std::abs(next - lambda) <= 1e-10 * std::max(1.0, std::abs(next))) return next;
    lambda = next;
  }
  return lambda;
}

namespace detail {

inline void require_symmetric_positive_definite(const Matrix& q) {
  const double scale = std::max(1.0, q.cwiseAbs().maxCoeff());
  if ((q - q.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw InvalidProblemError("quadratic matrix must be symmetric");
  }
  Eigen::LDLT<Matrix> ldlt(q);
  if (ldlt.info() != Eigen::Success || (ldlt.vectorD().array() <= 0.0).any()) {
    throw InvalidProblemError("quadratic matrix must be positive definite");
  }
}

inline SmoothOracle quadratic_oracle(Matrix q, Vector c) {
  require_symmetric_positive_definite(q);
  if (c.size() != q.rows()) throw DimensionMismatchError("quadratic c must match the matrix size");
  auto qs = std::make_shared<Matrix>(std::move(q));
  auto cs = std::make_shared<Vector>(std::move(c));
  SmoothOracle s;
  s.dim = static_cast<int>(qs->rows());
  s.value = [qs, cs](const Vector& x) { return 0.5 * x.dot(*qs * x) - cs->dot(x); };
  s.gradient = [qs, cs](const Vector& x) -> Vector { return *qs * x - *cs; };
  s.hessian_vec = [qs](const Vector&, const Vector& v) -> Vector { return *qs * v; };
  s.lipschitz = largest_eigenvalue(*qs);
  return s;
}

inline NonsmoothOracle zero_oracle(int dim) {
  NonsmoothOracle f;
  f.dim = dim;
  f.value = [](const Vector&) { return 0.0; };
  f.prox = [](double gamma, const Vector& v) { return prox_zero(gamma, v); };
  return f;
}

inline NonsmoothOracle l1_oracle(int dim, double lambda) {
  if (!(lambda > 0.0)) throw InvalidProblemError("l1 weight must be positive");
  NonsmoothOracle f;
  f.dim = dim;
  f.value = [lambda](const Vector& x) { return lambda * x.lpNorm<1>(); };
  f.prox = [lambda](double gamma, const Vector& v) {
    return prox_soft_threshold(gamma, lambda, v);
  };
  return f;
}

inline NonsmoothOracle box_oracle(Vector lo, Vector hi) {
  if (lo.size() != hi.size()) throw DimensionMismatchError("box bounds must share one dimension");
  for (Eigen::Index i = 0; i < lo.size(); ++i) {
    if (lo[i] > hi[i]) throw InvalidProblemError("box has lo > hi in some component");
  }
  auto los = std::make_shared<Vector>(std::move(lo));
  auto his = std::make_shared<Vector>(std::move(hi));
  NonsmoothOracle f;
  f.dim = static_cast<int>(los->size());
  f.value = [los, his](const Vector& x) {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (x[i] < (*los)[i] || x[i] > (*his)[i]) return kInfinity;
    }
    return 0.0;
  };
  f.prox = [los, his](double gamma, const Vector& v) {
    return prox_box_projection(gamma, *los, *his, v);
  };
  return f;
}

}  // namespace detail

/// Fixed-point identity check for declared critical points:
/// || xbar - prox(gamma, xbar - gamma * grad(xbar)) || <= 1e-10 at a fixed
/// validation gamma. Catches catalog typos instead of trusting constructors.
inline void validate_critical_points(const ProblemSpec& p, double gamma = 0.01) {
  for (const Vector& xbar : p.known_critical_points) {
    if (xbar.size() != p.dim()) {
      throw InvalidProblemError(p.name + ": critical point has wrong dimension");
    }
    const Vector step = xbar - gamma * p.smooth.gradient(xbar);
    const double residual = (xbar - p.nonsmooth.prox(gamma, step)).norm();
    if (!(residual <= 1e-10)) {
      throw InvalidProblemError(p.name + ": declared critical point fails the fixed-point check");
    }
  }
}

/// f = 0, Phi = 0.5 x'Qx - c'x with Q symmetric positive definite.
/// L is the largest eigenvalue of Q; the critical point solves Qx = c.
inline ProblemSpec make_quadratic(Matrix q, Vector c) {
  ProblemSpec p;
  p.name = "smooth-quadratic";
  p.smooth = detail::quadratic_oracle(q, c);
  p.nonsmooth = detail::zero_oracle(p.smooth.dim);
  Eigen::LDLT<Matrix> ldlt(q);
  p.known_critical_points.push_back(ldlt.solve(c));
  p.coercive = true;
  validate_critical_points(p);
  return p;
}

/// f = lambda*||.||_1, same quadratic Phi.
inline ProblemSpec make_lasso(Matrix q, Vector c, double lambda,
                              std::vector<Vector> critical_points = {}) {
  ProblemSpec p;
  p.name = "lasso-like";
  p.smooth = detail::quadratic_oracle(std::move(q), std::move(c));
  p.nonsmooth = detail::l1_oracle(p.smooth.dim, lambda);
  p.known_critical_points = std::move(critical_points);
  p.coercive = true;
  validate_critical_points(p);
  return p;
}

/// f = indicator of [lo, hi], quadratic Phi.
inline ProblemSpec make_box_quadratic(Matrix q, Vector c, Vector lo, Vector hi,
                                      std::vector<Vector> critical_points = {}) {
  ProblemSpec p;
  p.name = "box-constrained";
  p.smooth = detail::quadratic_oracle(std::move(q), std::move(c));
  p.nonsmooth = detail::box_oracle(std::move(lo), std::move(hi));
  if (p.nonsmooth.dim != p.smooth.dim) {
    throw DimensionMismatchError("box bounds must match the quadratic dimension");
  }
  p.known_critical_points = std::move(critical_points);
  p.coercive = true;
  validate_critical_points(p);
  return p;
}

/// Phi(x) = sum_i x_i^2 / (1 + x_i^2), bounded and nonconvex, with exact
/// gradient Lipschitz constant 2; f is the indicator of a box so the
/// composite is coercive. The origin is the unique smooth critical point.
inline ProblemSpec make_nonconvex_smooth(int dim, Vector lo, Vector hi) {
  if (dim < 1) throw InvalidProblemError("dimension must be positive");
  ProblemSpec p;
  p.name = "nonconvex-smooth";
  p.smooth.dim = dim;
  p.smooth.value = [](const Vector& x) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double x2 = x[i] * x[i];
      s += x2 / (1.0 + x2);
    }
    return s;
  };
  p.smooth.gradient = [](const Vector& x) -> Vector {
    Vector g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double denom = 1.0 + x[i] * x[i];
      g[i] = 2.0 * x[i] / (denom * denom);
    }
    return g;
  };
  p.smooth.hessian_vec = [](const Vector& x, const Vector& v) -> Vector {
    Vector out(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double x2 = x[i] * x[i];
      const double denom = 1.0 + x2;
      out[i] = 2.0 * (1.0 - 3.0 * x2) / (denom * denom * denom) * v[i];
    }
    return out;
  };
  p.smooth.lipschitz = 2.0;
  p.nonsmooth = detail::box_oracle(std::move(lo), std::move(hi));
  if (p.nonsmooth.dim != dim) throw DimensionMismatchError("box bounds must match dim");
  p.known_critical_points.push_back(Vector::Zero(dim));
  p.coercive = true;
  validate_critical_points(p);
  return p;
}

/// Phi(x) = ||x||^4 / 4 restricted by a box indicator; the gradient is
/// Lipschitz on the box with L = 3 * max_{x in box} ||x||^2 and trajectories
/// started inside the box stay inside it.
inline ProblemSpec make_quartic(int dim, Vector lo, Vector hi) {
  if (dim < 1) throw InvalidProblemError("dimension must be positive");
  ProblemSpec p;
  p.name = "quartic";
  p.smooth.dim = dim;
  p.smooth.value = [](const Vector& x) {
    const double n2 = x.squaredNorm();
    return 0.25 * n2 * n2;
  };
  p.smooth.gradient = [](const Vector& x) -> Vector { return x.squaredNorm() * x; };
  p.smooth.hessian_vec = [](const Vector& x, const Vector& v) -> Vector {
    return x.squaredNorm() * v + 2.0 * x.dot(v) * x;
  };
  p.nonsmooth = detail::box_oracle(lo, hi);
  if (p.nonsmooth.dim != dim) throw DimensionMismatchError("box bounds must match dim");
  double max_norm2 = 0.0;
  for (Eigen::Index i = 0; i < lo.size(); ++i) {
    max_norm2 += std::max(lo[i] * lo[i], hi[i] * hi[i]);
  }
  p.smooth.lipschitz = 3.0 * max_norm2;
  // Hessian bound on the box: ||x||^2 I + 2 x x' has norm 3||x||^2.
  bool origin_inside = true;
  for (Eigen::Index i = 0; i < lo.size(); ++i) {
    if (lo[i] > 0.0 || hi[i] < 0.0) origin_inside = false;
  }
  if (origin_inside) p.known_critical_points.push_back(Vector::Zero(dim));
  p.coercive = true;
  validate_critical_points(p);
  return p;
}

/// Default instances of the five problem families.
inline std::vector<ProblemSpec> catalog() {
  std::vector<ProblemSpec> out;

  Matrix q2(2, 2);
  q2 << 2.0, 0.5, 0.5, 1.0;
  Vector c2(2);
  c2 << 1.0, -1.0;
  out.push_back(make_quadratic(q2, c2));

  Matrix q1(1, 1);
  q1 << 1.0;
  Vector c1(1);
  c1 << 2.0;
  Vector crit1(1);
  crit1 << 1.0;  // 0 in u - 2 + d|u| forces u = 1
  out.push_back(make_lasso(q1, c1, 1.0, {crit1}));

  Vector lo(2), hi(2), cbox(2), critb(2);
  lo << -1.0, -1.0;
  hi << 1.0, 1.0;
  cbox << 2.0, 0.5;
  critb << 1.0, 0.5;  // first coordinate clipped at the upper bound
  out.push_back(make_box_quadratic(Matrix::Identity(2, 2), cbox, lo, hi, {critb}));

  Vector lo2(2), hi2(2);
  lo2 << -2.0, -2.0;
  hi2 << 2.0, 2.0;
  out.push_back(make_nonconvex_smooth(2, lo2, hi2));

  out.push_back(make_quartic(2, lo, hi));
  return out;
}

}  // namespace proxflow
