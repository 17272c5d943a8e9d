#ifndef GPCS_GP_HPP
#define GPCS_GP_HPP

#include <Eigen/Dense>

#include "gpcs/kernel.hpp"
#include "gpcs/linalg.hpp"
#include "gpcs/rng.hpp"

namespace gpcs {

// Working model: zero-or-constant-mean GP with an SE kernel plus i.i.d.
// Gaussian observation noise.
struct GpPrior {
  SeKernelParams kernel;
  NoiseModel noise;
  double mean_value = 0.0;
};

// Observation history in temporal order.
struct Dataset {
  Eigen::MatrixXd xs;  // t x d, one point per row
  Eigen::VectorXd ys;  // t

  Dataset() : xs(0, 0), ys(0) {}
  Dataset(Eigen::MatrixXd xs_, Eigen::VectorXd ys_);

  Eigen::Index size() const { return ys.size(); }
  Eigen::Index point_dim() const { return xs.cols(); }
  bool empty() const { return ys.size() == 0; }

  // First t observations, preserving order.
  Dataset prefix(Eigen::Index t) const;
  void append(const Eigen::VectorXd& x, double y);
};

// A multivariate normal over function values on a finite grid of points.
struct GridGaussian {
  Eigen::MatrixXd grid;  // m x d
  Eigen::VectorXd mean;  // m
  Eigen::MatrixXd cov;   // m x m, symmetrized on construction

  GridGaussian(Eigen::MatrixXd grid_, Eigen::VectorXd mean_,
               Eigen::MatrixXd cov_);

  Eigen::Index size() const { return mean.size(); }
};

GridGaussian prior_on_grid(const GpPrior& prior, const Eigen::MatrixXd& grid);

// Joint posterior over the grid after conditioning on the observations:
//   mean(x)     = mu0 + k(x)^T (K + eta^2 I)^{-1} (Y - mu0)
//   cov(x, x')  = k(x, x') - k(x)^T (K + eta^2 I)^{-1} k(x')
// The (K + eta^2 I) factor is computed once and reused for all grid
// queries. An empty dataset returns the prior exactly.
GridGaussian posterior_on_grid(const GpPrior& prior, const Dataset& data,
                               const Eigen::MatrixXd& grid);

// Log of the working likelihood of the function values f(X_1..X_t):
// sum_i log N(Y_i | f(X_i), eta^2). Zero for an empty dataset.
double log_likelihood(const Eigen::VectorXd& f_at_xs, const Dataset& data,
                      const NoiseModel& noise);

// log N(Y | mu0 1, K(X, X) + eta^2 I). Zero for an empty dataset.
double log_marginal_likelihood(const GpPrior& prior, const Dataset& data);

// Exact log prior-posterior ratio log R_t(f) evaluated at the function
// values f(X_1..X_t). Equals log_marginal_likelihood - log_likelihood:
// the mixture average of likelihood ratios collapses because the
// denominator likelihood is constant under the mixing expectation.
double exact_log_ppr(const GpPrior& prior, const Dataset& data,
                     const Eigen::VectorXd& f_at_xs);

// One draw of the function values described by g.
Eigen::VectorXd sample_function(const GridGaussian& g, Rng& rng);

}  // namespace gpcs

#endif  // GPCS_GP_HPP
