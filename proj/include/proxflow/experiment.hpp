#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "proxflow/config.hpp"
#include "proxflow/csv.hpp"
#include "proxflow/integrator.hpp"
#include "proxflow/rate.hpp"

namespace proxflow {

namespace detail {

inline json feasibility_to_json(const FeasibilityReport& r) {
  return json{{"first_holds", r.first_holds},
              {"second_holds", r.second_holds},
              {"first_margin", r.first_margin},
              {"second_margin", r.second_margin}};
}

inline json constants_to_json(const LyapunovConstants& k) {
  return json{{"m1", k.m1}, {"m2", k.m2}, {"c1", k.c1}, {"c2", k.c2}};
}

inline json limit_to_json(const LimitReport& r) {
  json x = json::array(), y = json::array();
  for (Eigen::Index i = 0; i < r.x_limit.size(); ++i) x.push_back(r.x_limit[i]);
  for (Eigen::Index i = 0; i < r.y_limit.size(); ++i) y.push_back(r.y_limit[i]);
  return json{{"x_limit", x},
              {"y_limit", y},
              {"prox_residual_at_limit", r.prox_residual_at_limit},
              {"y_relation_error", r.y_relation_error},
              {"h_at_limit", r.h_at_limit}};
}

inline json decrease_to_json(const DecreaseReport& r) {
  return json{{"max_jump", r.max_jump},     {"eta_int", r.eta_int},
              {"jumps_ok", r.jumps_ok},     {"total_change", r.total_change},
              {"dissipation", r.dissipation}, {"slack", r.slack},
              {"integral_ok", r.integral_ok}, {"ok", r.ok()}};
}

inline json zeta_to_json(const ZetaReport& r) {
  return json{{"ok", r.ok}, {"max_violation", r.max_violation}, {"worst_t", r.worst_t}};
}

inline json rate_to_json(const RateReport& r) {
  json out{{"regime", to_string(r.regime)},
           {"fit_a", r.fit_a},
           {"fit_b", r.fit_b},
           {"r_squared", r.r_squared},
           {"window", json::array({r.window.first, r.window.second})}};
  out["theta_hat"] = r.theta_hat ? json(*r.theta_hat) : json(nullptr);
  out["theta_interval"] = r.theta_interval
                              ? json::array({r.theta_interval->first, r.theta_interval->second})
                              : json(nullptr);
  return out;
}

}  // namespace detail

struct RunResult {
  int exit_code = 0;  // 0 stationarity, 2 time-limit, 3 divergence
  StopReason stop_reason = StopReason::time_limit;
  json summary;
  Trajectory trajectory;
};

inline int exit_code_for(StopReason r) {
  switch (r) {
    case StopReason::stationarity: return 0;
    case StopReason::time_limit: return 2;
    case StopReason::divergence: return 3;
  }
  return 3;
}

/// check -> integrate -> diagnostics -> rate analysis; writes the requested
/// artifacts (trajectory.csv, decay.csv, summary.json) into the output
/// directory. Parameter or config failures throw; they map to exit code 1 at
/// the CLI.
inline RunResult run_experiment(const ExperimentConfig& cfg,
                                const std::string& out_dir_override = "") {
  const auto t_start = std::chrono::steady_clock::now();

  const FeasibilityReport feas = check_conditions(cfg.params);

  Vector x0, y0;
  resolve_initial(cfg, x0, y0);

  IntegrateOptions opts;
  opts.dt = cfg.integration.dt;
  opts.t_max = cfg.integration.t_max;
  opts.stop_tol = cfg.integration.stop_tol;
  opts.sample_stride = cfg.integration.sample_stride;
  opts.skip_param_check = cfg.override_param_check;

  RunResult result;
  result.trajectory = integrate(cfg.problem, cfg.params, x0, y0, opts);
  result.stop_reason = result.trajectory.stop_reason;
  result.exit_code = exit_code_for(result.stop_reason);
  const Trajectory& traj = result.trajectory;

  json summary;
  summary["config"] = cfg.raw;
  summary["feasibility"] = detail::feasibility_to_json(feas);
  summary["constants"] = detail::constants_to_json(lyapunov_constants(cfg.params));
  summary["stop_reason"] = to_string(traj.stop_reason);
  summary["samples"] = traj.samples.size();
  summary["t_final"] = traj.samples.empty() ? 0.0 : traj.samples.back().state.t;

  summary["decrease"] =
      traj.samples.size() >= 2 ? detail::decrease_to_json(check_decrease(traj)) : json(nullptr);
  summary["zeta"] = detail::zeta_to_json(zeta_bound_check(traj));

  std::optional<DecaySignal> signal;
  if (traj.stop_reason == StopReason::stationarity) {
    const LimitReport limit = limit_report(traj);
    summary["limit"] = detail::limit_to_json(limit);
    try {
      signal = decay_signal(traj, limit);
      summary["rate"] = detail::rate_to_json(classify_rate(*signal));
    } catch (const InsufficientDataError&) {
      summary["rate"] = json(nullptr);
    }
  } else {
    summary["limit"] = json(nullptr);
    summary["rate"] = json(nullptr);
  }

  const std::string out_dir =
      out_dir_override.empty() ? cfg.outputs.directory : out_dir_override;
  std::filesystem::create_directories(out_dir);
  const auto wants = [&](const std::string& name) {
    for (const auto& a : cfg.outputs.artifacts) {
      if (a == name) return true;
    }
    return false;
  };
  json files = json::array();
  if (wants("trajectory.csv")) {
    std::ofstream os(out_dir + "/trajectory.csv");
    write_trajectory_csv(os, traj);
    files.push_back("trajectory.csv");
  }
  if (wants("decay.csv")) {
    std::ofstream os(out_dir + "/decay.csv");
    write_decay_csv(os, signal ? &*signal : nullptr);
    files.push_back("decay.csv");
  }
  const auto t_end = std::chrono::steady_clock::now();
  summary["duration_seconds"] = std::chrono::duration<double>(t_end - t_start).count();
  if (wants("summary.json")) {
    files.push_back("summary.json");
    summary["files"] = files;
    std::ofstream os(out_dir + "/summary.json");
    os << summary.dump(2) << "\n";
  } else {
    summary["files"] = files;
  }
  result.summary = summary;
  return result;
}

/// Axis of the sweep grid, log-spaced with inclusive endpoints.
struct SweepAxis {
  double lo = 0.0;
  double hi = 0.0;
  int count = 1;
};

struct SweepSpec {
  SweepAxis a;
  SweepAxis gamma;
  bool integrate = false;  // short run + rate regime per feasible cell
  double t_max = 10.0;
};

/// Parses "a=LO:HI:N,gamma=LO:HI:N".
inline SweepSpec parse_sweep_grid(const std::string& spec) {
  SweepSpec out;
  bool have_a = false, have_g = false;
  std::string rest = spec;
  while (!rest.empty()) {
    const std::size_t comma = rest.find(',');
    const std::string item = rest.substr(0, comma);
    rest = comma == std::string::npos ? "" : rest.substr(comma + 1);
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("grid item needs the form name=lo:hi:count");
    const std::string name = item.substr(0, eq);
    SweepAxis axis;
    if (std::sscanf(item.c_str() + eq + 1, "%lf:%lf:%d", &axis.lo, &axis.hi, &axis.count) != 3) {
      throw ConfigError("grid axis needs the form lo:hi:count: " + item);
    }
    if (!(axis.lo > 0.0) || !(axis.hi >= axis.lo) || axis.count < 1) {
      throw ConfigError("grid axis needs 0 < lo <= hi and count >= 1: " + item);
    }
    if (name == "a") {
      out.a = axis;
      have_a = true;
    } else if (name == "gamma") {
      out.gamma = axis;
      have_g = true;
    } else {
      throw ConfigError("unknown grid axis: " + name);
    }
  }
  if (!have_a || !have_g) throw ConfigError("grid must define both 'a' and 'gamma' axes");
  return out;
}

inline double log_grid_point(const SweepAxis& axis, int i) {
  if (axis.count == 1) return axis.lo;
  const double f = static_cast<double>(i) / (axis.count - 1);
  return axis.lo * std::pow(axis.hi / axis.lo, f);
}

/// Feasibility (and optionally a short integration with rate classification)
/// over the (a, gamma) grid at the config's b and the problem's L. Rows come
/// out in deterministic grid order, a-major.
inline std::vector<SweepRow> sweep_experiment(const ExperimentConfig& cfg, const SweepSpec& spec) {
  const long cells = static_cast<long>(spec.a.count) * spec.gamma.count;
  if (cells > 10000) throw ConfigError("sweep grid exceeds 10000 cells");

  std::vector<SweepRow> rows;
  rows.reserve(cells);
  for (int i = 0; i < spec.a.count; ++i) {
    for (int j = 0; j < spec.gamma.count; ++j) {
      SweepRow row;
      row.a = log_grid_point(spec.a, i);
      row.b = cfg.params.b > 0.0 ? cfg.params.b : 1.0;
      row.gamma = log_grid_point(spec.gamma, j);
      const SystemParams p{row.a, row.b, row.gamma, cfg.problem.smooth.lipschitz};
      const FeasibilityReport rep = check_conditions(p);
      row.feasible = rep.admissible();
      const LyapunovConstants k = lyapunov_constants(p);
      row.m1 = k.m1;
      row.m2 = k.m2;
      if (spec.integrate && row.feasible) {
        Vector x0, y0;
        resolve_initial(cfg, x0, y0);
        IntegrateOptions opts;
        opts.t_max = spec.t_max;
        opts.stop_tol = cfg.integration.stop_tol;
        opts.sample_stride = cfg.integration.sample_stride;
        const Trajectory traj = integrate(cfg.problem, p, x0, y0, opts);
        if (traj.stop_reason == StopReason::stationarity) {
          try {
            const DecaySignal sig = decay_signal(traj, limit_report(traj));
            row.regime = to_string(classify_rate(sig).regime);
          } catch (const InsufficientDataError&) {
            row.regime = "inconclusive";
          }
        } else {
          row.regime = to_string(traj.stop_reason);
        }
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace proxflow
