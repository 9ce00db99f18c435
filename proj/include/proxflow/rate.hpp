#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "proxflow/lyapunov.hpp"
#include "proxflow/trajectory.hpp"

namespace proxflow {

/// Distance-to-limit signal d(t) = ||x(t) - xbar|| + ||y(t) + (a/b) xbar||
/// and the discrete tail lengths sigma(t_k) = sum_{j>=k} (||xdot|| + ||ydot||) dt.
/// Samples in the trailing run with d below the noise floor (100 * stop_tol)
/// are excluded from fitting; `usable` is the retained prefix length.
struct DecaySignal {
  std::vector<double> times;
  std::vector<double> values;
  std::vector<double> sigma;
  std::size_t usable = 0;
  double noise_floor = 0.0;
  double t_final = 0.0;
  bool trivially_converged = false;  // every sample below the noise floor
};

inline DecaySignal decay_signal(const Trajectory& traj, const LimitReport& limit) {
  if (traj.stop_reason != StopReason::stationarity) {
    throw NotConvergedError("decay signal requires a trajectory stopped by stationarity");
  }
  const std::size_t m = traj.samples.size();
  DecaySignal sig;
  sig.times.reserve(m);
  sig.values.reserve(m);
  sig.sigma.assign(m, 0.0);

  const Vector& xbar = limit.x_limit;
  const Vector shift = (traj.params.a / traj.params.b) * xbar;
  for (const auto& s : traj.samples) {
    sig.times.push_back(s.state.t);
    sig.values.push_back((s.state.x - xbar).norm() + (s.state.y + shift).norm());
  }
  const double spacing = m >= 2 ? sig.times[1] - sig.times[0] : traj.dt;
  double acc = 0.0;
  for (std::size_t k = m; k-- > 0;) {
    const auto& diag = traj.samples[k].diag;
    acc += (diag.xdot_norm + diag.ydot_norm) * spacing;
    sig.sigma[k] = acc;
  }

  sig.noise_floor = 100.0 * traj.stop_tol;
  sig.t_final = sig.times.back();
  std::size_t usable = m;
  while (usable > 0 && sig.values[usable - 1] < sig.noise_floor) --usable;
  sig.usable = usable;
  sig.trivially_converged = usable == 0;
  if (!sig.trivially_converged && usable < 20) {
    throw InsufficientDataError("decay signal has fewer than 20 usable samples");
  }
  return sig;
}

/// Builds a signal from externally generated data (model fits, tests).
/// sigma is filled with the running maximum from the right, which dominates
/// d and is nonincreasing.
inline DecaySignal make_synthetic_signal(std::vector<double> times, std::vector<double> values,
                                         double noise_floor) {
  if (times.size() != values.size() || times.empty()) {
    throw InsufficientDataError("synthetic signal needs matching nonempty arrays");
  }
  DecaySignal sig;
  sig.times = std::move(times);
  sig.values = std::move(values);
  sig.sigma.assign(sig.values.size(), 0.0);
  double running = 0.0;
  for (std::size_t k = sig.values.size(); k-- > 0;) {
    running = std::max(running, sig.values[k]);
    sig.sigma[k] = running;
  }
  sig.noise_floor = noise_floor;
  sig.t_final = sig.times.back();
  std::size_t usable = sig.values.size();
  while (usable > 0 && sig.values[usable - 1] < noise_floor) --usable;
  sig.usable = usable;
  sig.trivially_converged = usable == 0;
  return sig;
}

enum class RateRegime { finite_time, exponential, polynomial, inconclusive };

inline const char* to_string(RateRegime r) {
  switch (r) {
    case RateRegime::finite_time: return "finite-time";
    case RateRegime::exponential: return "exponential";
    case RateRegime::polynomial: return "polynomial";
    case RateRegime::inconclusive: return "inconclusive";
  }
  return "unknown";
}

/// Classification outcome. theta_hat is a point estimate (0.5 for the
/// exponential regime, (1+|s|)/(1+2|s|) for the polynomial one); the
/// finite-time regime reports the interval (0, 0.5) instead of a point.
struct RateReport {
  RateRegime regime = RateRegime::inconclusive;
  std::optional<double> theta_hat;
  std::optional<std::pair<double, double>> theta_interval;
  double fit_a = 0.0;  // a1 (exponential) or a2 (polynomial)
  double fit_b = 0.0;  // b1 (exponential) or b2 (polynomial)
  double r_squared = 0.0;
  std::pair<double, double> window{0.0, 0.0};
};

/// Inverts (1 - theta) / (2*theta - 1) = |s| for a fitted log-log slope
/// s < 0: theta = (1 + |s|) / (1 + 2|s|), always in (0.5, 1).
inline double theta_from_polynomial_slope(double s) {
  if (!(s < 0.0)) throw InvalidSlopeError("polynomial decay requires a negative slope");
  const double mag = -s;
  return (1.0 + mag) / (1.0 + 2.0 * mag);
}

/// Forward map theta in (0.5, 1) to the log-log slope -(1-theta)/(2*theta-1).
inline double polynomial_slope_from_theta(double theta) {
  if (!(theta > 0.5) || !(theta < 1.0)) {
    throw InvalidParameterError("polynomial regime requires theta in (0.5, 1)");
  }
  return -(1.0 - theta) / (2.0 * theta - 1.0);
}

namespace detail {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  bool valid = false;
};

inline LineFit fit_line(std::span<const double> xs, std::span<const double> ys) {
  LineFit f;
  const std::size_t n = xs.size();
  if (n < 2) return f;
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx <= 0.0) return f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ys[i] - (f.intercept + f.slope * xs[i]);
    ssr += r * r;
  }
  f.r2 = syy > 0.0 ? std::max(0.0, 1.0 - ssr / syy) : 0.0;
  f.valid = true;
  return f;
}

}  // namespace detail

/// Decision procedure:
///  1. every sample below the noise floor -> finite-time (trivially).
///  2. the signal hits the floor before 0.9 * t_final with an accelerating
///     log-slope (late-window log-slope at least 3x the mid-window one) ->
///     finite-time; a slope proportional to the floor itself (exponential
///     tails) does not trigger this.
///  3. otherwise least-squares fits of log d vs t and log d vs log t over the
///     last half of the usable samples; the model with the larger r^2 wins.
///     Both r^2 below 0.95 -> inconclusive.
inline RateReport classify_rate(const DecaySignal& sig) {
  RateReport rep;
  if (sig.trivially_converged) {
    rep.regime = RateRegime::finite_time;
    rep.theta_interval = {0.0, 0.5};
    rep.r_squared = 1.0;
    rep.window = {sig.times.front(), sig.t_final};
    return rep;
  }
  if (sig.usable < 20) throw InsufficientDataError("rate classification needs >= 20 usable samples");

  const std::size_t u = sig.usable;
  std::vector<double> logd(u);
  for (std::size_t i = 0; i < u; ++i) logd[i] = std::log(sig.values[i]);

  const bool floor_hit = u < sig.times.size();
  if (floor_hit && sig.times[u] < 0.9 * sig.t_final) {
    const auto slope_of = [&](std::size_t lo, std::size_t hi) {
      return detail::fit_line(std::span(sig.times).subspan(lo, hi - lo),
                              std::span(logd).subspan(lo, hi - lo));
    };
    const detail::LineFit mid = slope_of(u / 4, u / 2);
    const detail::LineFit late = slope_of((3 * u) / 4, u);
    if (mid.valid && late.valid && late.slope < 0.0 &&
        std::abs(late.slope) >= 3.0 * std::max(std::abs(mid.slope), 1e-300)) {
      rep.regime = RateRegime::finite_time;
      rep.theta_interval = {0.0, 0.5};
      rep.r_squared = late.r2;
      rep.window = {sig.times[(3 * u) / 4], sig.times[u - 1]};
      return rep;
    }
  }

  const std::size_t lo = u / 2;
  rep.window = {sig.times[lo], sig.times[u - 1]};

  const detail::LineFit exp_fit = detail::fit_line(
      std::span(sig.times).subspan(lo, u - lo), std::span(logd).subspan(lo, u - lo));

  std::vector<double> logt, logd_pos;
  logt.reserve(u - lo);
  logd_pos.reserve(u - lo);
  for (std::size_t i = lo; i < u; ++i) {
    if (sig.times[i] > 0.0) {
      logt.push_back(std::log(sig.times[i]));
      logd_pos.push_back(logd[i]);
    }
  }
  const detail::LineFit poly_fit = detail::fit_line(logt, logd_pos);

  const double r2e = (exp_fit.valid && exp_fit.slope < 0.0) ? exp_fit.r2 : -1.0;
  const double r2p = (poly_fit.valid && poly_fit.slope < 0.0) ? poly_fit.r2 : -1.0;

  if (std::max(r2e, r2p) < 0.95) {
    rep.regime = RateRegime::inconclusive;
    rep.r_squared = std::max(0.0, std::max(r2e, r2p));
    return rep;
  }
  if (r2e >= r2p) {
    rep.regime = RateRegime::exponential;
    rep.theta_hat = 0.5;
    rep.fit_a = std::exp(exp_fit.intercept);
    rep.fit_b = -exp_fit.slope;
    rep.r_squared = exp_fit.r2;
  } else {
    rep.regime = RateRegime::polynomial;
    const double s = poly_fit.slope;
    rep.theta_hat = theta_from_polynomial_slope(s);
    const double p = -s;
    rep.fit_a = std::exp(-poly_fit.intercept / p);
    rep.fit_b = 0.0;  // the asymptotic log-log fit does not resolve the offset
    rep.r_squared = poly_fit.r2;
  }
  return rep;
}

}  // namespace proxflow
