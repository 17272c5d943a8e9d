// Command-line harness around the experiment runners. Each subcommand
// starts from its experiment's default configuration, applies an
// optional JSON config file, then applies flag overrides.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gpcs/experiments.hpp"

namespace {

struct FlagOverrides {
  std::string config_path;
  double alpha = -1.0;
  double gamma = -1.0;
  double beta = -1.0;
  std::vector<int> times;
  int reps = -1;
  std::int64_t seed = -1;
  double noise_scale = -1.0;
  int grid = -1;
  std::string out;
};

void add_common_flags(CLI::App* cmd, FlagOverrides& flags) {
  cmd->add_option("--config", flags.config_path, "JSON config file");
  cmd->add_option("--alpha", flags.alpha, "miscoverage level in (0,1)");
  cmd->add_option("--gamma", flags.gamma, "belief parameter (> 0)");
  cmd->add_option("--beta", flags.beta, "likelihood power in (0,1]");
  cmd->add_option("--times", flags.times, "checkpoints, e.g. 3,5,10")
      ->delimiter(',');
  cmd->add_option("--reps", flags.reps, "number of replications");
  cmd->add_option("--seed", flags.seed, "master seed");
  cmd->add_option("--noise-scale", flags.noise_scale,
                  "true-to-assumed noise sd ratio");
  cmd->add_option("--grid", flags.grid,
                  "plot grid size (1-D) or lattice points per axis (2-D)");
  cmd->add_option("--out", flags.out, "output directory");
}

gpcs::ExperimentConfig build_config(gpcs::ExperimentKind kind,
                                    const FlagOverrides& flags) {
  gpcs::ExperimentConfig config =
      flags.config_path.empty()
          ? gpcs::default_config(kind)
          : gpcs::load_config_file(flags.config_path, kind);
  if (flags.alpha >= 0.0 || flags.gamma >= 0.0 || flags.beta >= 0.0) {
    config.cs = gpcs::CsConfig(
        flags.alpha >= 0.0 ? flags.alpha : config.cs.alpha,
        flags.gamma >= 0.0 ? flags.gamma : config.cs.gamma,
        flags.beta >= 0.0 ? flags.beta : config.cs.beta_power);
  }
  if (!flags.times.empty()) config.times = flags.times;
  if (flags.reps >= 0) config.replications = flags.reps;
  if (flags.seed >= 0) {
    config.seeds = {static_cast<std::uint64_t>(flags.seed)};
  }
  if (flags.noise_scale >= 0.0) config.true_noise_scale = flags.noise_scale;
  if (flags.grid >= 0) config.plot_grid_size = flags.grid;
  if (!flags.out.empty()) config.output_dir = flags.out;
  gpcs::validate_config(config);
  return config;
}

int run_kind(gpcs::ExperimentKind kind, const FlagOverrides& flags) {
  const gpcs::ExperimentConfig config = build_config(kind, flags);
  int n_failed = 0;
  switch (kind) {
    case gpcs::ExperimentKind::coverage: {
      const auto result = gpcs::run_coverage(config);
      gpcs::emit_results(result, config.output_dir);
      n_failed = result.summary.n_failed;
      std::cout << "coverage: miscoverage_cs = "
                << result.summary.miscoverage_cs
                << ", miscoverage_gp = " << result.summary.miscoverage_gp
                << ", n_failed = " << n_failed << "\n";
      break;
    }
    case gpcs::ExperimentKind::noise_misspec: {
      const auto result = gpcs::run_noise_misspec(config);
      gpcs::emit_results(result, config.output_dir);
      n_failed = result.summary.n_failed;
      std::cout << "noise_misspec (scale " << config.true_noise_scale
                << ", beta " << config.cs.beta_power
                << "): miscoverage_cs = " << result.summary.miscoverage_cs
                << ", miscoverage_gp = " << result.summary.miscoverage_gp
                << ", n_failed = " << n_failed << "\n";
      break;
    }
    case gpcs::ExperimentKind::bo_compare:
    case gpcs::ExperimentKind::branin: {
      const auto result = kind == gpcs::ExperimentKind::branin
                              ? gpcs::run_branin(config)
                              : gpcs::run_bo_compare(config);
      gpcs::emit_results(result, config.output_dir);
      n_failed = result.summary.n_failed;
      const auto last = [](const std::vector<double>& v) {
        return v.empty() ? std::numeric_limits<double>::quiet_NaN() : v.back();
      };
      std::cout << gpcs::kind_name(kind) << ": final median best_so_far"
                << " gp_lcb = " << last(result.summary.gp_lcb.median)
                << ", cs_lcb = " << last(result.summary.cs_lcb.median)
                << ", n_failed = " << n_failed << "\n";
      break;
    }
  }
  std::cout << "results written to " << config.output_dir << "\n";
  return n_failed > 0 ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "gpcs: prior-robust confidence sequences for Gaussian-process models"};
  app.require_subcommand(1);

  FlagOverrides flags;
  CLI::App* coverage =
      app.add_subcommand("coverage", "time-uniform coverage study");
  CLI::App* noise =
      app.add_subcommand("noise", "coverage under misspecified noise");
  CLI::App* bo_compare =
      app.add_subcommand("bo-compare", "GP-LCB vs CS-LCB on sampled 1-D objectives");
  CLI::App* branin =
      app.add_subcommand("branin", "GP-LCB vs CS-LCB on the Branin benchmark");
  for (CLI::App* cmd : {coverage, noise, bo_compare, branin}) {
    add_common_flags(cmd, flags);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (coverage->parsed()) {
      return run_kind(gpcs::ExperimentKind::coverage, flags);
    }
    if (noise->parsed()) {
      return run_kind(gpcs::ExperimentKind::noise_misspec, flags);
    }
    if (bo_compare->parsed()) {
      return run_kind(gpcs::ExperimentKind::bo_compare, flags);
    }
    return run_kind(gpcs::ExperimentKind::branin, flags);
  } catch (const gpcs::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const gpcs::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 1;
  } catch (const gpcs::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
