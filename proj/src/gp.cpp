#include "gpcs/gp.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

namespace gpcs {

Dataset::Dataset(Eigen::MatrixXd xs_, Eigen::VectorXd ys_)
    : xs(std::move(xs_)), ys(std::move(ys_)) {
  if (xs.rows() != ys.size()) {
    throw DimensionMismatch("Dataset: " + std::to_string(xs.rows()) +
                            " points but " + std::to_string(ys.size()) +
                            " observations");
  }
}

Dataset Dataset::prefix(Eigen::Index t) const {
  if (t < 0 || t > size()) {
    throw DimensionMismatch("Dataset::prefix: t = " + std::to_string(t) +
                            " out of range");
  }
  return Dataset(xs.topRows(t), ys.head(t));
}

void Dataset::append(const Eigen::VectorXd& x, double y) {
  if (!empty() && x.size() != point_dim()) {
    throw DimensionMismatch("Dataset::append: point dimension mismatch");
  }
  if (empty()) xs.resize(0, x.size());
  xs.conservativeResize(xs.rows() + 1, Eigen::NoChange);
  xs.row(xs.rows() - 1) = x.transpose();
  ys.conservativeResize(ys.size() + 1);
  ys[ys.size() - 1] = y;
}

GridGaussian::GridGaussian(Eigen::MatrixXd grid_, Eigen::VectorXd mean_,
                           Eigen::MatrixXd cov_)
    : grid(std::move(grid_)), mean(std::move(mean_)), cov(std::move(cov_)) {
  const Eigen::Index m = grid.rows();
  if (mean.size() != m || cov.rows() != m || cov.cols() != m) {
    throw DimensionMismatch("GridGaussian: inconsistent sizes");
  }
  cov = 0.5 * (cov + cov.transpose()).eval();
  if ((cov.diagonal().array() < -1e-10).any()) {
    throw NotPositiveDefinite("GridGaussian: negative variance on diagonal");
  }
}

GridGaussian prior_on_grid(const GpPrior& prior, const Eigen::MatrixXd& grid) {
  if (grid.rows() == 0) {
    throw EmptyGrid("prior_on_grid: empty grid");
  }
  Eigen::VectorXd mean =
      Eigen::VectorXd::Constant(grid.rows(), prior.mean_value);
  return GridGaussian(grid, std::move(mean), kernel_matrix(grid, prior.kernel));
}

GridGaussian posterior_on_grid(const GpPrior& prior, const Dataset& data,
                               const Eigen::MatrixXd& grid) {
  if (data.empty()) return prior_on_grid(prior, grid);
  if (grid.cols() != data.point_dim()) {
    throw DimensionMismatch("posterior_on_grid: grid dimension " +
                            std::to_string(grid.cols()) + " vs data dimension " +
                            std::to_string(data.point_dim()));
  }
  if (grid.rows() == 0) {
    throw EmptyGrid("posterior_on_grid: empty grid");
  }

  Eigen::MatrixXd k_obs = kernel_matrix(data.xs, prior.kernel);
  k_obs.diagonal().array() += prior.noise.noise_variance;
  const SpdFactor f = cholesky_with_jitter(k_obs);

  const Eigen::MatrixXd k_cross = cross_kernel(grid, data.xs, prior.kernel);
  const Eigen::VectorXd centered =
      data.ys - Eigen::VectorXd::Constant(data.size(), prior.mean_value);

  Eigen::VectorXd mean =
      Eigen::VectorXd::Constant(grid.rows(), prior.mean_value) +
      k_cross * solve_spd(f, centered);
  Eigen::MatrixXd cov = kernel_matrix(grid, prior.kernel) -
                        k_cross * solve_spd(f, k_cross.transpose());
  return GridGaussian(grid, std::move(mean), std::move(cov));
}

double log_likelihood(const Eigen::VectorXd& f_at_xs, const Dataset& data,
                      const NoiseModel& noise) {
  if (f_at_xs.size() != data.size()) {
    throw DimensionMismatch("log_likelihood: f has " +
                            std::to_string(f_at_xs.size()) +
                            " values for " + std::to_string(data.size()) +
                            " observations");
  }
  if (data.empty()) return 0.0;
  const double eta_sq = noise.noise_variance;
  const double norm_term =
      -0.5 * std::log(2.0 * std::numbers::pi * eta_sq);
  const double quad =
      (data.ys - f_at_xs).squaredNorm() / (2.0 * eta_sq);
  return static_cast<double>(data.size()) * norm_term - quad;
}

double log_marginal_likelihood(const GpPrior& prior, const Dataset& data) {
  if (data.empty()) return 0.0;
  Eigen::MatrixXd k = kernel_matrix(data.xs, prior.kernel);
  k.diagonal().array() += prior.noise.noise_variance;
  const SpdFactor f = cholesky_with_jitter(k);
  const Eigen::VectorXd mean =
      Eigen::VectorXd::Constant(data.size(), prior.mean_value);
  return log_mvn_density(data.ys, mean, f);
}

double exact_log_ppr(const GpPrior& prior, const Dataset& data,
                     const Eigen::VectorXd& f_at_xs) {
  if (f_at_xs.size() != data.size()) {
    throw DimensionMismatch("exact_log_ppr: f has " +
                            std::to_string(f_at_xs.size()) + " values for " +
                            std::to_string(data.size()) + " observations");
  }
  if (data.empty()) return 0.0;  // R_0 = 1
  return log_marginal_likelihood(prior, data) -
         log_likelihood(f_at_xs, data, prior.noise);
}

Eigen::VectorXd sample_function(const GridGaussian& g, Rng& rng) {
  return sample_mvn(g.mean, cholesky_with_jitter(g.cov), rng);
}

}  // namespace gpcs
