#ifndef GPCS_EXPERIMENTS_HPP
#define GPCS_EXPERIMENTS_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "gpcs/bo.hpp"
#include "gpcs/gp.hpp"
#include "gpcs/ratio_cs.hpp"

namespace gpcs {

inline constexpr const char* kVersion = "gpcs-v0.1.0";

enum class ExperimentKind { coverage, noise_misspec, bo_compare, branin };

std::string kind_name(ExperimentKind kind);
ExperimentKind kind_from_name(const std::string& name);

struct ExperimentConfig {
  ExperimentKind kind;
  GpPrior true_prior;     // generates f* (its noise field is unused)
  GpPrior working_prior;  // used for all inference
  CsConfig cs;
  std::vector<int> times;  // checkpoints; BO kinds use times.back() as budget
  int plot_grid_size;      // grid points in 1-D, lattice points per axis in 2-D
  int replications;
  std::vector<std::uint64_t> seeds;  // one master, or one entry per replication
  double true_noise_scale;           // eta* / eta (standard deviations)
  std::string output_dir;
};

// Default study configuration per experiment kind: prior A {l=1, s2=1.5}
// as the generating prior, prior B {l=3, s2=1} as the working prior,
// eta^2 = 0.1, alpha = 0.05, gamma = 1e-2, checkpoints {3,5,10,20,30,60}.
ExperimentConfig default_config(ExperimentKind kind);

void validate_config(const ExperimentConfig& config);

// Master seed of replication r: seeds[r] when one seed per replication
// was given, otherwise a stream derived from seeds[0] and r.
std::uint64_t replication_seed(const ExperimentConfig& config, int r);

struct CoverageRecord {
  int replication;
  int t;
  double x;
  double f_true;
  double gp_mean;
  double gp_lo;
  double gp_hi;
  double cs_lo;
  double cs_hi;
};

struct CoverageSummary {
  double miscoverage_cs = 0.0;  // fraction of replications with any CS miss
  double miscoverage_gp = 0.0;
  int n_failed = 0;
};

struct CoverageResult {
  ExperimentConfig config;
  std::vector<CoverageRecord> records;
  CoverageSummary summary;
  std::vector<std::string> failures;  // one message per failed replication
  double duration_s = 0.0;
};

struct BoQuantiles {
  std::vector<double> median;  // indexed by step - 1
  std::vector<double> q25;
  std::vector<double> q75;
};

struct BoCompareSummary {
  BoQuantiles gp_lcb;
  BoQuantiles cs_lcb;
  int n_failed = 0;
};

struct BoCompareResult {
  ExperimentConfig config;
  std::vector<BoRun> gp_runs;  // one per replication, in replication order
  std::vector<BoRun> cs_runs;
  BoCompareSummary summary;
  std::vector<std::string> failures;
  double duration_s = 0.0;
};

// Draws f* from the generating prior, observes it at uniform random
// points with noise eta* = true_noise_scale * eta, and records the GP
// posterior 95% band and the confidence-sequence band on the plot grid
// at every checkpoint. Failed replications are recorded, not dropped.
CoverageResult run_coverage(const ExperimentConfig& config);

// Same pipeline as run_coverage with the configured noise scaling and
// likelihood power; scale 1, beta 1 reproduces run_coverage exactly.
CoverageResult run_noise_misspec(const ExperimentConfig& config);

// Per replication: one f* drawn from the generating prior on the
// candidate grid, then GP-LCB and CS-LCB runs on the same f* and the
// same observation-noise stream.
BoCompareResult run_bo_compare(const ExperimentConfig& config);

// Branin on [-5,10] x [0,15]:
//   a (x2 - b x1^2 + c x1 - r)^2 + s (1 - t) cos(x1) + s
// with a=1, b=5.1/(4 pi^2), c=5/pi, r=6, s=10, t=1/(8 pi).
double branin(const Eigen::VectorXd& x);
Eigen::MatrixXd branin_bounds();
inline constexpr double kBraninMinimum = 0.39788735772973816;

// GP-LCB vs CS-LCB on the Branin function with the configured (by
// default deliberately misspecified) working prior.
BoCompareResult run_branin(const ExperimentConfig& config);

// n x 1 grid of evenly spaced points on [lo, hi].
Eigen::MatrixXd linspace_grid(double lo, double hi, int n);

// Row-major lattice over the bounds box, per_dim points per axis; the
// last axis varies fastest.
Eigen::MatrixXd lattice_grid(const Eigen::MatrixXd& bounds, int per_dim);

// Writes records.csv and summary.json under output_dir. Reruns with the
// same config and seeds are byte-identical except the duration_s field.
void emit_results(const CoverageResult& result,
                  const std::filesystem::path& output_dir);
void emit_results(const BoCompareResult& result,
                  const std::filesystem::path& output_dir);

// Strict JSON config parsing: keys mirror ExperimentConfig field names,
// missing keys fall back to the kind's defaults, unknown keys are a
// ConfigError.
ExperimentConfig config_from_json_text(const std::string& text,
                                       ExperimentKind kind);
ExperimentConfig load_config_file(const std::string& path,
                                  ExperimentKind kind);
std::string config_to_json_text(const ExperimentConfig& config);

// Shortest-width formatting with 17 significant digits.
std::string format_g17(double value);

}  // namespace gpcs

#endif  // GPCS_EXPERIMENTS_HPP
