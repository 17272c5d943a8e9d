#include "gpcs/bo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace gpcs {

std::string acquisition_name(const Acquisition& kind) {
  return std::holds_alternative<GpLcb>(kind) ? "gp_lcb" : "cs_lcb";
}

Eigen::VectorXd gp_lcb(const GridGaussian& posterior, double beta_t) {
  const Eigen::VectorXd sigma =
      posterior.cov.diagonal().cwiseMax(0.0).cwiseSqrt();
  return posterior.mean - std::sqrt(beta_t) * sigma;
}

Eigen::VectorXd cs_lcb(const GpPrior& prior, const Dataset& data,
                       const Eigen::MatrixXd& candidate_grid,
                       const CsConfig& cfg) {
  const std::vector<BandPoint> bands =
      band_on_grid(prior, data, candidate_grid, cfg);
  Eigen::VectorXd lower(candidate_grid.rows());
  for (Eigen::Index i = 0; i < lower.size(); ++i) {
    lower[i] = bands[static_cast<std::size_t>(i)].lower;
  }
  return lower;
}

std::pair<Eigen::Index, Eigen::VectorXd> argmin_grid(
    const Eigen::VectorXd& values, const Eigen::MatrixXd& grid) {
  if (values.size() == 0 || grid.rows() != values.size()) {
    throw DimensionMismatch("argmin_grid: " + std::to_string(values.size()) +
                            " values over " + std::to_string(grid.rows()) +
                            " grid points");
  }
  Eigen::Index best = 0;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw NonFiniteAcquisition("argmin_grid: non-finite value at index " +
                                 std::to_string(i));
    }
    if (values[i] < values[best]) best = i;
  }
  return {best, grid.row(best).transpose()};
}

BoRun bo_run(const BlackBox& box, const GpPrior& prior,
             const Acquisition& kind, int budget,
             const Eigen::MatrixXd& candidate_grid, std::uint64_t seed) {
  if (budget < 1) {
    throw ConfigError("bo_run: budget must be at least 1");
  }
  BoRun run;
  run.seed = seed;
  run.kind = kind;
  run.steps.reserve(static_cast<std::size_t>(budget));

  Rng rng(seed);
  Dataset data;
  double best = std::numeric_limits<double>::infinity();

  for (int t = 1; t <= budget; ++t) {
    Eigen::VectorXd acq;
    try {
      if (const GpLcb* g = std::get_if<GpLcb>(&kind)) {
        acq = gp_lcb(posterior_on_grid(prior, data, candidate_grid), g->beta_t);
      } else {
        acq = cs_lcb(prior, data, candidate_grid, std::get<CsLcb>(kind).cfg);
      }
      const auto [index, x] = argmin_grid(acq, candidate_grid);
      const double f_true = box.objective(x);
      const double y = f_true + box.noise.noise_sd() * standard_normal(rng);
      data.append(x, y);
      best = std::min(best, f_true);
      run.steps.push_back(BoStep{t, x, y, acq[index], best});
    } catch (const Error& e) {
      run.error = "step " + std::to_string(t) + ": " + e.what();
      break;
    }
  }
  return run;
}

}  // namespace gpcs
