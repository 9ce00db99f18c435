#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "proxflow/catalog.hpp"
#include "proxflow/rng.hpp"
#include "proxflow/system_params.hpp"

namespace proxflow {

using json = nlohmann::json;

namespace detail {

inline Vector vector_from_json(const json& arr, const std::string& what) {
  if (!arr.is_array()) throw ConfigError(what + " must be an array of numbers");
  Vector v(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) throw ConfigError(what + " must contain numbers only");
    v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
  }
  return v;
}

inline Matrix matrix_from_json(const json& arr, int dim, const std::string& what) {
  // dense row-major, flat
  if (!arr.is_array() || arr.size() != static_cast<std::size_t>(dim) * dim) {
    throw ConfigError(what + " must be a flat row-major array of dim*dim numbers");
  }
  Matrix m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) {
      const auto& cell = arr[static_cast<std::size_t>(r) * dim + c];
      if (!cell.is_number()) throw ConfigError(what + " must contain numbers only");
      m(r, c) = cell.get<double>();
    }
  }
  return m;
}

}  // namespace detail

/// Builds a problem from its config block: a catalog name plus an optional
/// parameter block overriding the defaults. Custom quadratics pass Q as a
/// flat row-major array.
inline ProblemSpec problem_from_json(const json& block) {
  if (!block.is_object() || !block.contains("name") || !block["name"].is_string()) {
    throw ConfigError("problem block must be an object with a string 'name'");
  }
  const std::string name = block["name"].get<std::string>();
  const int dim = block.value("dim", 2);
  if (dim < 1) throw ConfigError("problem dim must be a positive integer");

  const auto quadratic_parts = [&](Matrix& q, Vector& c) {
    q = block.contains("q") ? detail::matrix_from_json(block["q"], dim, "problem.q")
                            : Matrix::Identity(dim, dim);
    c = block.contains("c") ? detail::vector_from_json(block["c"], "problem.c")
                            : Vector::Zero(dim);
    if (c.size() != dim) throw ConfigError("problem.c does not match problem.dim");
  };
  const auto box_parts = [&](Vector& lo, Vector& hi, double default_halfwidth) {
    lo = block.contains("lo") ? detail::vector_from_json(block["lo"], "problem.lo")
                              : Vector::Constant(dim, -default_halfwidth);
    hi = block.contains("hi") ? detail::vector_from_json(block["hi"], "problem.hi")
                              : Vector::Constant(dim, default_halfwidth);
    if (lo.size() != dim || hi.size() != dim) {
      throw ConfigError("problem.lo/hi do not match problem.dim");
    }
  };

  try {
    if (name == "smooth-quadratic") {
      Matrix q;
      Vector c;
      quadratic_parts(q, c);
      return make_quadratic(q, c);
    }
    if (name == "lasso-like") {
      Matrix q;
      Vector c;
      quadratic_parts(q, c);
      const double lambda = block.value("lambda", 1.0);
      return make_lasso(q, c, lambda);
    }
    if (name == "box-constrained") {
      Matrix q;
      Vector c, lo, hi;
      quadratic_parts(q, c);
      box_parts(lo, hi, 1.0);
      return make_box_quadratic(q, c, lo, hi);
    }
    if (name == "nonconvex-smooth") {
      Vector lo, hi;
      box_parts(lo, hi, 2.0);
      return make_nonconvex_smooth(dim, lo, hi);
    }
    if (name == "quartic") {
      Vector lo, hi;
      box_parts(lo, hi, 1.0);
      return make_quartic(dim, lo, hi);
    }
  } catch (const InvalidProblemError& e) {
    throw ConfigError(std::string("invalid problem block: ") + e.what());
  } catch (const DimensionMismatchError& e) {
    throw ConfigError(std::string("invalid problem block: ") + e.what());
  }
  throw ConfigError("unknown problem name: " + name);
}

struct InitialSpec {
  bool random = false;
  std::uint64_t seed = 0;
  Vector x0, y0;  // filled when not random
};

struct IntegrationSpec {
  double dt = 0.0;  // 0 means auto
  double t_max = 10.0;
  double stop_tol = 1e-8;
  int sample_stride = 1;
};

struct OutputSpec {
  std::string directory = "out";
  std::vector<std::string> artifacts{"trajectory.csv", "decay.csv", "summary.json"};
};

struct ExperimentConfig {
  json raw;  // echoed into the summary
  ProblemSpec problem;
  bool params_auto = false;
  double auto_b = 1.0;
  SystemParams params;  // resolved (after suggest_params when auto)
  InitialSpec initial;
  IntegrationSpec integration;
  OutputSpec outputs;
  bool override_param_check = false;
};

inline ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");
  ExperimentConfig cfg;
  cfg.raw = j;

  if (!j.contains("problem")) throw ConfigError("config is missing the 'problem' block");
  cfg.problem = problem_from_json(j["problem"]);

  if (!j.contains("params")) throw ConfigError("config is missing the 'params' block");
  const json& pj = j["params"];
  if (pj.is_string() && pj.get<std::string>() == "auto") {
    cfg.params_auto = true;
    cfg.auto_b = 1.0;
  } else if (pj.is_object()) {
    if (pj.value("auto", false)) {
      cfg.params_auto = true;
      cfg.auto_b = pj.value("b", 1.0);
    } else {
      for (const char* key : {"a", "b", "gamma"}) {
        if (!pj.contains(key) || !pj[key].is_number()) {
          throw ConfigError(std::string("params.") + key + " must be a number (or use \"auto\")");
        }
      }
      cfg.params = SystemParams{pj["a"].get<double>(), pj["b"].get<double>(),
                                pj["gamma"].get<double>(), cfg.problem.smooth.lipschitz};
    }
  } else {
    throw ConfigError("params must be an object or the string \"auto\"");
  }
  if (cfg.params_auto) {
    const SuggestedParams sp = suggest_params(cfg.problem.smooth.lipschitz, cfg.auto_b);
    if (!sp.feasible) {
      throw ConfigError("params are \"auto\" but the feasibility search found no admissible point");
    }
    cfg.params = sp.params;
  }

  if (!j.contains("initial")) throw ConfigError("config is missing the 'initial' block");
  const json& init = j["initial"];
  if (init.is_object() && init.contains("random")) {
    if (!init["random"].is_number_unsigned() && !init["random"].is_number_integer()) {
      throw ConfigError("initial.random requires an integer seed");
    }
    cfg.initial.random = true;
    cfg.initial.seed = init["random"].get<std::uint64_t>();
  } else if (init.is_object() && init.contains("x0") && init.contains("y0")) {
    cfg.initial.x0 = detail::vector_from_json(init["x0"], "initial.x0");
    cfg.initial.y0 = detail::vector_from_json(init["y0"], "initial.y0");
    if (cfg.initial.x0.size() != cfg.problem.dim() ||
        cfg.initial.y0.size() != cfg.problem.dim()) {
      throw ConfigError("initial state dimension does not match the problem dimension");
    }
  } else {
    throw ConfigError("initial must provide x0 and y0 arrays or a {\"random\": seed} entry");
  }

  if (j.contains("integration")) {
    const json& ij = j["integration"];
    if (!ij.is_object()) throw ConfigError("integration must be an object");
    if (ij.contains("dt") && ij["dt"].is_number()) cfg.integration.dt = ij["dt"].get<double>();
    // "auto" or absence keeps dt = 0 (auto)
    cfg.integration.t_max = ij.value("t_max", cfg.integration.t_max);
    cfg.integration.stop_tol = ij.value("stop_tol", cfg.integration.stop_tol);
    cfg.integration.sample_stride = ij.value("sample_stride", cfg.integration.sample_stride);
    if (cfg.integration.t_max < 0.0) throw ConfigError("integration.t_max must be nonnegative");
    if (cfg.integration.sample_stride < 1) {
      throw ConfigError("integration.sample_stride must be >= 1");
    }
  }

  if (j.contains("outputs")) {
    const json& oj = j["outputs"];
    if (!oj.is_object()) throw ConfigError("outputs must be an object");
    cfg.outputs.directory = oj.value("directory", cfg.outputs.directory);
    if (oj.contains("artifacts")) {
      if (!oj["artifacts"].is_array()) throw ConfigError("outputs.artifacts must be an array");
      cfg.outputs.artifacts.clear();
      for (const auto& a : oj["artifacts"]) {
        if (!a.is_string()) throw ConfigError("outputs.artifacts must contain strings");
        cfg.outputs.artifacts.push_back(a.get<std::string>());
      }
    }
  }

  cfg.override_param_check = j.value("override_param_check", false);
  return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return parse_config(j);
}

/// Initial state resolution; random states draw x0 then y0 componentwise
/// uniformly from [-1, 1) using the documented generator.
inline void resolve_initial(const ExperimentConfig& cfg, Vector& x0, Vector& y0) {
  if (cfg.initial.random) {
    Rng rng(cfg.initial.seed);
    const int n = cfg.problem.dim();
    x0.resize(n);
    y0.resize(n);
    for (int i = 0; i < n; ++i) x0[i] = rng.uniform(-1.0, 1.0);
    for (int i = 0; i < n; ++i) y0[i] = rng.uniform(-1.0, 1.0);
  } else {
    x0 = cfg.initial.x0;
    y0 = cfg.initial.y0;
  }
}

}  // namespace proxflow
