#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rso/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "Parameter-agnostic optimization lab: normalized momentum methods, "
      "backtracking line search, bound calculators and inequality "
      "certification under relaxed smoothness"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out";
  std::optional<std::uint64_t> seed_override;
  int jobs = 0;

  auto add_common = [&](CLI::App* cmd, bool with_config) {
    if (with_config) {
      cmd->add_option("--config", config_path, "config JSON path")
          ->required();
    }
    cmd->add_option("--out", out_dir, "output directory (default: out)");
  };

  auto* run_cmd = app.add_subcommand("run", "execute one configured run");
  add_common(run_cmd, true);
  std::uint64_t seed_value = 0;
  auto* seed_opt =
      run_cmd->add_option("--seed", seed_value, "override the config seed");

  auto* sweep_cmd =
      app.add_subcommand("sweep", "stepsize-multiplier grid of runs");
  add_common(sweep_cmd, true);
  sweep_cmd->add_option("--jobs", jobs,
                        "parallel workers (default: logical cores)");

  auto* lb_cmd = app.add_subcommand(
      "certify-lower-bound",
      "build the hard instance, certify it, and compare the empirical "
      "iteration count with the theoretical floor");
  rso::harness::LowerBoundArgs lb;
  lb_cmd->add_option("--eps", lb.eps, "target stationarity (0, 1/2)")
      ->required();
  lb_cmd->add_option("--eta", lb.eta, "stepsize scale")->required();
  lb_cmd->add_option("--alpha", lb.alpha, "stepsize decay power in (0,1)")
      ->required();
  lb_cmd->add_option("--delta1", lb.delta1, "initial gap (>= 1/4)")
      ->required();
  lb_cmd->add_option("--L0", lb.L0, "L0 (>= 8/eta)")->required();
  lb_cmd->add_option("--L1", lb.L1, "L1 (> 0)")->required();
  std::string rule = "last_gradient";
  lb_cmd->add_option("--rule", rule,
                     "momentum rule: last_gradient | uniform_average | "
                     "nsgdm_weights");
  lb_cmd->add_option("--max-iterations", lb.max_iterations,
                     "safety cap on the run length");
  add_common(lb_cmd, false);

  auto* lemmas_cmd = app.add_subcommand(
      "verify-lemmas", "batch-verify the summation/product inequalities");
  std::string grid_path;
  lemmas_cmd->add_option("--config", grid_path,
                         "grid JSON (omit for the default grids)");
  lemmas_cmd->add_option("--out", out_dir, "output directory");

  auto* smooth_cmd = app.add_subcommand(
      "certify-smoothness",
      "sample-check the declared smoothness certificate of an objective");
  add_common(smooth_cmd, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      if (seed_opt->count() > 0) seed_override = seed_value;
      return rso::harness::cmd_run(config_path, out_dir, seed_override);
    }
    if (sweep_cmd->parsed()) {
      return rso::harness::cmd_sweep(config_path, out_dir, jobs);
    }
    if (lb_cmd->parsed()) {
      if (rule == "last_gradient") {
        lb.rule = rso::MomentumRule::last_gradient;
      } else if (rule == "uniform_average") {
        lb.rule = rso::MomentumRule::uniform_average;
      } else if (rule == "nsgdm_weights") {
        lb.rule = rso::MomentumRule::nsgdm_weights;
      } else {
        std::cerr << "config error: --rule: unknown rule '" << rule << "'\n";
        return rso::harness::kExitConfigError;
      }
      return rso::harness::cmd_certify_lower_bound(lb, out_dir);
    }
    if (lemmas_cmd->parsed()) {
      std::optional<std::filesystem::path> grid;
      if (!grid_path.empty()) grid = grid_path;
      return rso::harness::cmd_verify_lemmas(grid, out_dir);
    }
    if (smooth_cmd->parsed()) {
      return rso::harness::cmd_certify_smoothness(config_path, out_dir);
    }
  } catch (const rso::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return rso::harness::kExitConfigError;
  } catch (const rso::DivergedError& e) {
    std::cerr << "diverged: " << e.what() << "\n";
    return rso::harness::kExitDiverged;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
