#include <algorithm>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "proxflow/experiment.hpp"
#include "proxflow/verify.hpp"

namespace {

int cmd_run(const std::string& config_path, bool override_check, const std::string& out_dir) {
  proxflow::ExperimentConfig cfg = proxflow::load_config(config_path);
  if (override_check) cfg.override_param_check = true;
  const proxflow::RunResult result = proxflow::run_experiment(cfg, out_dir);
  std::cout << "stop_reason: " << proxflow::to_string(result.stop_reason)
            << "  samples: " << result.summary["samples"]
            << "  t_final: " << result.summary["t_final"] << "\n";
  if (!result.summary["limit"].is_null()) {
    std::cout << "limit: x=" << result.summary["limit"]["x_limit"].dump()
              << "  prox_residual=" << result.summary["limit"]["prox_residual_at_limit"]
              << "  y_relation_error=" << result.summary["limit"]["y_relation_error"] << "\n";
  }
  if (!result.summary["rate"].is_null()) {
    std::cout << "rate: regime=" << result.summary["rate"]["regime"]
              << "  theta_hat=" << result.summary["rate"]["theta_hat"].dump()
              << "  r2=" << result.summary["rate"]["r_squared"] << "\n";
  }
  return result.exit_code;
}

int cmd_verify() {
  const auto results = proxflow::run_verification();
  std::size_t width = 0;
  for (const auto& r : results) width = std::max(width, r.name.size());
  bool all_pass = true;
  for (const auto& r : results) {
    all_pass = all_pass && r.pass;
    std::printf("%-*s  %s  %s\n", static_cast<int>(width), r.name.c_str(),
                r.pass ? "PASS" : "FAIL", r.detail.c_str());
  }
  std::printf("%zu/%zu checks passed\n",
              static_cast<std::size_t>(std::count_if(results.begin(), results.end(),
                                                     [](const auto& r) { return r.pass; })),
              results.size());
  return all_pass ? 0 : 1;
}

int cmd_sweep(const std::string& config_path, const std::string& grid, bool override_check,
              const std::string& out_dir) {
  proxflow::ExperimentConfig cfg = proxflow::load_config(config_path);
  if (override_check) cfg.override_param_check = true;
  proxflow::SweepSpec spec = proxflow::parse_sweep_grid(grid);
  if (cfg.raw.contains("sweep") && cfg.raw["sweep"].is_object()) {
    spec.integrate = cfg.raw["sweep"].value("integrate", false);
    spec.t_max = cfg.raw["sweep"].value("t_max", spec.t_max);
  }
  const auto rows = proxflow::sweep_experiment(cfg, spec);
  const std::string dir = out_dir.empty() ? cfg.outputs.directory : out_dir;
  std::filesystem::create_directories(dir);
  std::ofstream os(dir + "/sweep.csv");
  proxflow::write_sweep_csv(os, rows);
  const long feasible =
      std::count_if(rows.begin(), rows.end(), [](const auto& r) { return r.feasible; });
  std::cout << rows.size() << " cells, " << feasible << " feasible -> " << dir << "/sweep.csv\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"proximal-gradient flow experiments"};
  app.require_subcommand(1);

  std::string config_path, out_dir, grid;
  bool override_check = false;

  CLI::App* run = app.add_subcommand("run", "integrate one configured experiment");
  run->add_option("config", config_path, "experiment config (JSON)")->required();
  run->add_flag("--override-param-check", override_check,
                "integrate even when the parameter condition fails");
  run->add_option("--out", out_dir, "output directory (overrides the config)");

  CLI::App* verify = app.add_subcommand("verify", "run the cross-module invariant suite");

  CLI::App* sweep = app.add_subcommand("sweep", "feasibility/rate table over a parameter grid");
  sweep->add_option("config", config_path, "experiment config (JSON)")->required();
  sweep->add_option("--grid", grid, "grid spec, e.g. a=0.01:1.9:32,gamma=1e-6:1:32")->required();
  sweep->add_flag("--override-param-check", override_check,
                  "ignored for infeasible cells (they are never integrated)");
  sweep->add_option("--out", out_dir, "output directory (overrides the config)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, override_check, out_dir);
    if (verify->parsed()) return cmd_verify();
    if (sweep->parsed()) return cmd_sweep(config_path, grid, override_check, out_dir);
  } catch (const proxflow::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const proxflow::InvalidParameterError& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
