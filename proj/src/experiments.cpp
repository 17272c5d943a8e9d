#include "gpcs/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <utility>

#include "gpcs/parallel.hpp"

namespace gpcs {

namespace {

constexpr double kCoverageLo = -10.0;
constexpr double kCoverageHi = 10.0;
constexpr double kGpBandZ = 1.96;  // two-sided 95% normal quantile

// Salts for per-replication sub-streams.
constexpr std::uint64_t kSaltObjective = 0x6f626a65637469ULL;
constexpr std::uint64_t kSaltNoise = 0x6e6f697365ULL;

using Clock = std::chrono::steady_clock;

double elapsed_s(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Type-7 quantile (linear interpolation) of an already sorted sample.
double quantile_sorted(const std::vector<double>& sorted, double p) {
  const std::size_t n = sorted.size();
  if (n == 1) return sorted[0];
  const double h = p * static_cast<double>(n - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, n - 1);
  const double w = h - static_cast<double>(lo);
  return (1.0 - w) * sorted[lo] + w * sorted[hi];
}

}  // namespace

std::string kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::coverage: return "coverage";
    case ExperimentKind::noise_misspec: return "noise_misspec";
    case ExperimentKind::bo_compare: return "bo_compare";
    case ExperimentKind::branin: return "branin";
  }
  throw ConfigError("kind_name: unknown kind");
}

ExperimentKind kind_from_name(const std::string& name) {
  if (name == "coverage") return ExperimentKind::coverage;
  if (name == "noise_misspec") return ExperimentKind::noise_misspec;
  if (name == "bo_compare") return ExperimentKind::bo_compare;
  if (name == "branin") return ExperimentKind::branin;
  throw ConfigError("unknown experiment kind: " + name);
}

ExperimentConfig default_config(ExperimentKind kind) {
  const GpPrior prior_a{SeKernelParams(1.0, 1.5), NoiseModel(0.1), 0.0};
  const GpPrior prior_b{SeKernelParams(3.0, 1.0), NoiseModel(0.1), 0.0};
  ExperimentConfig config{
      kind,
      prior_a,
      prior_b,
      CsConfig(0.05, 1e-2, 1.0),
      {3, 5, 10, 20, 30, 60},
      200,
      50,
      {0},
      1.0,
      "out",
  };
  switch (kind) {
    case ExperimentKind::coverage:
    case ExperimentKind::noise_misspec:
      break;
    case ExperimentKind::bo_compare:
      config.times = {3, 7, 18, 25};
      config.replications = 10;
      break;
    case ExperimentKind::branin:
      // Misspecified working prior from the 2-D benchmark setup.
      config.true_prior = GpPrior{SeKernelParams(7.0, 0.1), NoiseModel(0.1), 0.0};
      config.working_prior = config.true_prior;
      config.times = {50};
      config.plot_grid_size = 50;
      config.replications = 10;
      break;
  }
  return config;
}

void validate_config(const ExperimentConfig& config) {
  if (config.times.empty()) {
    throw ConfigError("config: times must be nonempty");
  }
  for (std::size_t i = 0; i < config.times.size(); ++i) {
    if (config.times[i] < 0) {
      throw ConfigError("config: times must be nonnegative");
    }
    if (i > 0 && config.times[i] <= config.times[i - 1]) {
      throw ConfigError("config: times must be strictly increasing");
    }
  }
  if (config.replications < 1) {
    throw ConfigError("config: replications must be at least 1");
  }
  if (config.plot_grid_size < 2) {
    throw ConfigError("config: plot_grid_size must be at least 2");
  }
  if (config.seeds.empty()) {
    throw ConfigError("config: seeds must be nonempty");
  }
  if (config.seeds.size() != 1 &&
      config.seeds.size() != static_cast<std::size_t>(config.replications)) {
    throw ConfigError(
        "config: seeds must hold one master seed or one seed per replication");
  }
  if (!(config.true_noise_scale > 0.0)) {
    throw ConfigError("config: true_noise_scale must be positive");
  }
  if ((config.kind == ExperimentKind::bo_compare ||
       config.kind == ExperimentKind::branin) &&
      config.times.back() < 1) {
    throw ConfigError("config: BO budget (last checkpoint) must be at least 1");
  }
}

std::uint64_t replication_seed(const ExperimentConfig& config, int r) {
  if (config.seeds.size() == static_cast<std::size_t>(config.replications)) {
    return config.seeds[static_cast<std::size_t>(r)];
  }
  return derive_seed(config.seeds[0], static_cast<std::uint64_t>(r));
}

Eigen::MatrixXd linspace_grid(double lo, double hi, int n) {
  if (n < 2) throw ConfigError("linspace_grid: need at least 2 points");
  Eigen::MatrixXd grid(n, 1);
  grid.col(0) = Eigen::VectorXd::LinSpaced(n, lo, hi);
  return grid;
}

Eigen::MatrixXd lattice_grid(const Eigen::MatrixXd& bounds, int per_dim) {
  if (bounds.cols() != 2 || bounds.rows() < 1) {
    throw ConfigError("lattice_grid: bounds must be d x 2");
  }
  if (per_dim < 2) throw ConfigError("lattice_grid: need at least 2 per axis");
  const Eigen::Index d = bounds.rows();
  Eigen::Index total = 1;
  for (Eigen::Index k = 0; k < d; ++k) total *= per_dim;

  Eigen::MatrixXd axes(per_dim, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    axes.col(k) = Eigen::VectorXd::LinSpaced(per_dim, bounds(k, 0), bounds(k, 1));
  }
  Eigen::MatrixXd grid(total, d);
  for (Eigen::Index i = 0; i < total; ++i) {
    Eigen::Index rest = i;
    for (Eigen::Index k = d - 1; k >= 0; --k) {
      grid(i, k) = axes(rest % per_dim, k);
      rest /= per_dim;
    }
  }
  return grid;
}

namespace {

struct ReplicationOutput {
  std::vector<CoverageRecord> records;
  bool cs_missed = false;
  bool gp_missed = false;
  std::string failure;
};

ReplicationOutput coverage_replication(const ExperimentConfig& config,
                                       const Eigen::MatrixXd& grid, int r) {
  ReplicationOutput out;
  try {
    Rng rng(replication_seed(config, r));
    const Eigen::Index m = grid.rows();
    const int horizon = config.times.back();

    Eigen::MatrixXd xs(horizon, 1);
    for (int i = 0; i < horizon; ++i) {
      xs(i, 0) = uniform_real(rng, kCoverageLo, kCoverageHi);
    }

    // One coherent f* draw shared by every checkpoint: jointly sample at
    // the plot grid and every future observation point.
    Eigen::MatrixXd joint(m + horizon, 1);
    joint.topRows(m) = grid;
    joint.bottomRows(horizon) = xs;
    const Eigen::VectorXd f_joint =
        sample_function(prior_on_grid(config.true_prior, joint), rng);
    const Eigen::VectorXd f_grid = f_joint.head(m);
    const Eigen::VectorXd f_obs = f_joint.tail(horizon);

    const double eta_star =
        config.true_noise_scale * config.working_prior.noise.noise_sd();
    Eigen::VectorXd ys(horizon);
    for (int i = 0; i < horizon; ++i) {
      ys[i] = f_obs[i] + eta_star * standard_normal(rng);
    }
    const Dataset full(xs, ys);

    out.records.reserve(config.times.size() * static_cast<std::size_t>(m));
    for (int t : config.times) {
      const Dataset data = full.prefix(t);
      const GridGaussian post =
          posterior_on_grid(config.working_prior, data, grid);
      const Eigen::VectorXd sigma =
          post.cov.diagonal().cwiseMax(0.0).cwiseSqrt();
      const std::vector<BandPoint> bands =
          band_on_grid(config.working_prior, data, grid, config.cs);

      for (Eigen::Index j = 0; j < m; ++j) {
        CoverageRecord rec;
        rec.replication = r;
        rec.t = t;
        rec.x = grid(j, 0);
        rec.f_true = f_grid[j];
        rec.gp_mean = post.mean[j];
        rec.gp_lo = post.mean[j] - kGpBandZ * sigma[j];
        rec.gp_hi = post.mean[j] + kGpBandZ * sigma[j];
        rec.cs_lo = bands[static_cast<std::size_t>(j)].lower;
        rec.cs_hi = bands[static_cast<std::size_t>(j)].upper;
        out.records.push_back(rec);

        // Interval endpoints count as covered.
        if (rec.f_true < rec.cs_lo || rec.f_true > rec.cs_hi) {
          out.cs_missed = true;
        }
        if (rec.f_true < rec.gp_lo || rec.f_true > rec.gp_hi) {
          out.gp_missed = true;
        }
      }
    }
  } catch (const Error& e) {
    out.records.clear();
    out.failure = e.what();
  }
  return out;
}

CoverageResult run_coverage_impl(const ExperimentConfig& config) {
  validate_config(config);
  const auto start = Clock::now();
  const Eigen::MatrixXd grid =
      linspace_grid(kCoverageLo, kCoverageHi, config.plot_grid_size);

  std::vector<ReplicationOutput> outputs(
      static_cast<std::size_t>(config.replications));
  parallel_for_index(outputs.size(), [&](std::size_t r) {
    outputs[r] = coverage_replication(config, grid, static_cast<int>(r));
  });

  CoverageResult result{config, {}, {}, {}, 0.0};
  int completed = 0;
  int cs_missed = 0;
  int gp_missed = 0;
  for (std::size_t r = 0; r < outputs.size(); ++r) {
    auto& out = outputs[r];
    if (!out.failure.empty()) {
      result.failures.push_back("replication " + std::to_string(r) + ": " +
                                out.failure);
      continue;
    }
    ++completed;
    cs_missed += out.cs_missed ? 1 : 0;
    gp_missed += out.gp_missed ? 1 : 0;
    result.records.insert(result.records.end(), out.records.begin(),
                          out.records.end());
  }
  result.summary.n_failed = config.replications - completed;
  if (completed > 0) {
    result.summary.miscoverage_cs =
        static_cast<double>(cs_missed) / static_cast<double>(completed);
    result.summary.miscoverage_gp =
        static_cast<double>(gp_missed) / static_cast<double>(completed);
  }
  result.duration_s = elapsed_s(start);
  return result;
}

}  // namespace

CoverageResult run_coverage(const ExperimentConfig& config) {
  if (config.kind != ExperimentKind::coverage) {
    throw ConfigError("run_coverage: config kind is " + kind_name(config.kind));
  }
  return run_coverage_impl(config);
}

CoverageResult run_noise_misspec(const ExperimentConfig& config) {
  if (config.kind != ExperimentKind::noise_misspec) {
    throw ConfigError("run_noise_misspec: config kind is " +
                      kind_name(config.kind));
  }
  return run_coverage_impl(config);
}

namespace {

// Objective backed by function values sampled on the candidate grid.
std::function<double(const Eigen::VectorXd&)> grid_lookup_objective(
    const Eigen::MatrixXd& grid, const Eigen::VectorXd& values) {
  return [grid, values](const Eigen::VectorXd& x) -> double {
    for (Eigen::Index i = 0; i < grid.rows(); ++i) {
      if (grid.row(i).transpose() == x) return values[i];
    }
    throw OutOfDomain("objective: query point is not on the candidate grid");
  };
}

BoCompareResult run_bo_pair_impl(const ExperimentConfig& config,
                                 const Eigen::MatrixXd& candidate_grid,
                                 bool sample_objective) {
  validate_config(config);
  const auto start = Clock::now();
  const int budget = config.times.back();
  const double eta_star =
      config.true_noise_scale * config.working_prior.noise.noise_sd();

  struct PairOutput {
    BoRun gp;
    BoRun cs;
  };
  std::vector<PairOutput> outputs(static_cast<std::size_t>(config.replications));

  parallel_for_index(outputs.size(), [&](std::size_t r) {
    const std::uint64_t run_seed =
        replication_seed(config, static_cast<int>(r));

    std::function<double(const Eigen::VectorXd&)> objective;
    if (sample_objective) {
      Rng rng_f(derive_seed(run_seed, kSaltObjective));
      const Eigen::VectorXd f_star = sample_function(
          prior_on_grid(config.true_prior, candidate_grid), rng_f);
      objective = grid_lookup_objective(candidate_grid, f_star);
    } else {
      objective = [](const Eigen::VectorXd& x) { return branin(x); };
    }

    const BlackBox box{objective, NoiseModel(eta_star * eta_star),
                       sample_objective
                           ? (Eigen::MatrixXd(1, 2) << kCoverageLo, kCoverageHi)
                                 .finished()
                           : branin_bounds()};

    // Both methods share the observation-noise stream.
    const std::uint64_t noise_seed = derive_seed(run_seed, kSaltNoise);
    outputs[r].gp = bo_run(box, config.working_prior, GpLcb{}, budget,
                           candidate_grid, noise_seed);
    outputs[r].cs = bo_run(box, config.working_prior, CsLcb{config.cs}, budget,
                           candidate_grid, noise_seed);
  });

  BoCompareResult result{config, {}, {}, {}, {}, 0.0};
  result.gp_runs.reserve(outputs.size());
  result.cs_runs.reserve(outputs.size());
  for (std::size_t r = 0; r < outputs.size(); ++r) {
    result.gp_runs.push_back(std::move(outputs[r].gp));
    result.cs_runs.push_back(std::move(outputs[r].cs));
    for (const auto* run : {&result.gp_runs.back(), &result.cs_runs.back()}) {
      if (run->failed()) {
        result.failures.push_back("replication " + std::to_string(r) + ", " +
                                  acquisition_name(run->kind) + ": " +
                                  run->error);
      }
    }
  }
  result.summary.n_failed = static_cast<int>(result.failures.size());

  auto quantiles = [budget](const std::vector<BoRun>& runs) {
    BoQuantiles q;
    for (int step = 0; step < budget; ++step) {
      std::vector<double> values;
      for (const auto& run : runs) {
        if (static_cast<int>(run.steps.size()) > step) {
          values.push_back(run.steps[static_cast<std::size_t>(step)].best_so_far);
        }
      }
      if (values.empty()) break;
      std::sort(values.begin(), values.end());
      q.median.push_back(quantile_sorted(values, 0.5));
      q.q25.push_back(quantile_sorted(values, 0.25));
      q.q75.push_back(quantile_sorted(values, 0.75));
    }
    return q;
  };
  result.summary.gp_lcb = quantiles(result.gp_runs);
  result.summary.cs_lcb = quantiles(result.cs_runs);
  result.duration_s = elapsed_s(start);
  return result;
}

}  // namespace

BoCompareResult run_bo_compare(const ExperimentConfig& config) {
  if (config.kind != ExperimentKind::bo_compare) {
    throw ConfigError("run_bo_compare: config kind is " +
                      kind_name(config.kind));
  }
  const Eigen::MatrixXd grid =
      linspace_grid(kCoverageLo, kCoverageHi, config.plot_grid_size);
  return run_bo_pair_impl(config, grid, /*sample_objective=*/true);
}

double branin(const Eigen::VectorXd& x) {
  if (x.size() != 2) {
    throw DimensionMismatch("branin: expected a 2-D point");
  }
  const Eigen::MatrixXd bounds = branin_bounds();
  for (Eigen::Index k = 0; k < 2; ++k) {
    if (x[k] < bounds(k, 0) || x[k] > bounds(k, 1)) {
      throw OutOfDomain("branin: coordinate " + std::to_string(k) +
                        " outside [" + std::to_string(bounds(k, 0)) + ", " +
                        std::to_string(bounds(k, 1)) + "]");
    }
  }
  constexpr double a = 1.0;
  const double b = 5.1 / (4.0 * std::numbers::pi * std::numbers::pi);
  const double c = 5.0 / std::numbers::pi;
  constexpr double r = 6.0;
  constexpr double s = 10.0;
  const double t = 1.0 / (8.0 * std::numbers::pi);
  const double inner = x[1] - b * x[0] * x[0] + c * x[0] - r;
  return a * inner * inner + s * (1.0 - t) * std::cos(x[0]) + s;
}

Eigen::MatrixXd branin_bounds() {
  Eigen::MatrixXd bounds(2, 2);
  bounds << -5.0, 10.0, 0.0, 15.0;
  return bounds;
}

BoCompareResult run_branin(const ExperimentConfig& config) {
  if (config.kind != ExperimentKind::branin) {
    throw ConfigError("run_branin: config kind is " + kind_name(config.kind));
  }
  const Eigen::MatrixXd grid =
      lattice_grid(branin_bounds(), config.plot_grid_size);
  return run_bo_pair_impl(config, grid, /*sample_objective=*/false);
}

}  // namespace gpcs
