#ifndef GPCS_BO_HPP
#define GPCS_BO_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gpcs/gp.hpp"
#include "gpcs/ratio_cs.hpp"

namespace gpcs {

// Noisy black-box objective to be minimized. The observation noise here
// is the data-generating noise and may differ from the working model's.
struct BlackBox {
  std::function<double(const Eigen::VectorXd&)> objective;
  NoiseModel noise;
  Eigen::MatrixXd domain_bounds;  // d x 2, [lo, hi] per dimension
};

struct GpLcb {
  double beta_t = 4.0;  // constant schedule, sqrt(beta_t) = 2 by default
};

struct CsLcb {
  CsConfig cfg;
};

using Acquisition = std::variant<GpLcb, CsLcb>;

std::string acquisition_name(const Acquisition& kind);

struct BoStep {
  int t;                     // 1-based step index
  Eigen::VectorXd x_chosen;
  double y_observed;         // noisy observation fed back to the model
  double acquisition_value;  // acquisition at the chosen point
  double best_so_far;        // min true objective over queried points
};

struct BoRun {
  std::uint64_t seed = 0;
  Acquisition kind;
  std::vector<BoStep> steps;
  std::string error;  // nonempty if the run stopped early

  bool failed() const { return !error.empty(); }
};

// mu_t - sqrt(beta_t) sigma_t elementwise over the grid the posterior
// lives on; negative variances within roundoff are clamped to zero.
Eigen::VectorXd gp_lcb(const GridGaussian& posterior, double beta_t);

// Lower envelope of the confidence band over the candidate grid.
Eigen::VectorXd cs_lcb(const GpPrior& prior, const Dataset& data,
                       const Eigen::MatrixXd& candidate_grid,
                       const CsConfig& cfg);

// Smallest index attaining the minimum, with its grid point.
std::pair<Eigen::Index, Eigen::VectorXd> argmin_grid(
    const Eigen::VectorXd& values, const Eigen::MatrixXd& grid);

// Sequential loop: at step t the acquisition is evaluated on the
// candidate grid using only the first t-1 observations, its argmin is
// queried, and the noisy observation is appended. Acquisition failures
// stop the loop and are recorded on the run instead of thrown.
BoRun bo_run(const BlackBox& box, const GpPrior& prior,
             const Acquisition& kind, int budget,
             const Eigen::MatrixXd& candidate_grid, std::uint64_t seed);

}  // namespace gpcs

#endif  // GPCS_BO_HPP
