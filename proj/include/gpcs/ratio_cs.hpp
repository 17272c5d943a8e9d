#ifndef GPCS_RATIO_CS_HPP
#define GPCS_RATIO_CS_HPP

#include <Eigen/Dense>

#include <vector>

#include "gpcs/gp.hpp"

namespace gpcs {

// Confidence-sequence configuration: miscoverage level alpha, belief
// parameter gamma (signal-variance inflation of the widened prior), and
// likelihood power beta (1 = unpowered).
struct CsConfig {
  double alpha = 0.05;
  double gamma = 1e-2;
  double beta_power = 1.0;

  CsConfig() = default;
  CsConfig(double alpha_, double gamma_, double beta_power_);
};

// Gaussian shape of the posterior-to-widened-prior density ratio on a
// grid:  N(f | mu_t, K_t) / N(f | mu0~, K0~) = exp(log_c) N(f | mu_c, sigma_c).
struct RatioGaussian {
  Eigen::MatrixXd grid;     // m x d
  Eigen::VectorXd mu_c;     // m
  Eigen::MatrixXd sigma_c;  // m x m
  double log_c;
  double log_det_sigma_c;   // carried from construction, = -log det(sigma_c^{-1})
};

// Per-point confidence interval: the axis projection of the radius_k
// Mahalanobis ellipsoid of the ratio Gaussian.
struct BandPoint {
  Eigen::VectorXd x;
  double lower;
  double upper;
  double radius_k;
};

// Builds the ratio Gaussian from a posterior and a widened prior on the
// same grid:
//   sigma_c = (K_t^{-1} - K0~^{-1})^{-1}
//   mu_c    = sigma_c (K_t^{-1} mu_t - K0~^{-1} mu0~)
// log_c is fixed by the defining identity
//   log N(f|mu_t,K_t) - log N(f|mu0~,K0~) = log_c + log N(f|mu_c,sigma_c).
// This form accepts arbitrary Gaussian pairs but needs both covariances
// to be invertible at working precision.
RatioGaussian ratio_gaussian(const GridGaussian& posterior,
                             const GridGaussian& widened_prior);

// The same object computed from the data side, for grids that contain
// every observed point. Woodbury reduction against the observation block
// turns all inversions into solves with K(X,X) + gamma/(1+gamma) eta^2 I,
// whose smallest eigenvalue is bounded away from zero, so this route
// stays exact on dense grids whose prior Gram is numerically singular:
//   sigma_c = (1+gamma)/gamma [K0 - K_gx (K_xx + lambda I)^{-1} K_xg]
//   mu_c    = mu0 + K_gx (K_xx + lambda I)^{-1} (Y - mu0)
// with lambda = gamma/(1+gamma) eta^2.
RatioGaussian ratio_gaussian(const GpPrior& prior, const Dataset& data,
                             const Eigen::MatrixXd& grid, double gamma);

// Mahalanobis radius k at which c N(f | mu_c, sigma_c) crosses the
// threshold alpha^{1/beta}:
//   k = sqrt(2 [log_c - log(alpha)/beta - (m/2) log(2 pi) - log|sigma_c|/2])
// Throws EmptyConfidenceSet when the density at mu_c is already below the
// threshold (negative bracket).
double cs_radius(const RatioGaussian& r, const CsConfig& cfg);

// Confidence interval for f(x_test): builds the grid as the set union of
// the observed points and x_test (repeated locations enter once), forms
// the ratio Gaussian against the gamma-widened prior, and projects the
// k-ellipsoid onto the x_test coordinate.
BandPoint band_at(const GpPrior& prior, const Dataset& data,
                  const Eigen::VectorXd& x_test, const CsConfig& cfg);

// band_at mapped over the rows of plot_grid, one independent grid per
// test point. Per-point failures are collected and reported together
// with the offending points.
std::vector<BandPoint> band_on_grid(const GpPrior& prior, const Dataset& data,
                                    const Eigen::MatrixXd& plot_grid,
                                    const CsConfig& cfg);

}  // namespace gpcs

#endif  // GPCS_RATIO_CS_HPP
