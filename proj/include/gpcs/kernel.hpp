#ifndef GPCS_KERNEL_HPP
#define GPCS_KERNEL_HPP

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>

#include "gpcs/errors.hpp"

namespace gpcs {

// Squared-exponential kernel hyperparameters.
// k(x, x') = signal_variance * exp(-||x - x'||^2 / (2 lengthscale^2))
struct SeKernelParams {
  double lengthscale;
  double signal_variance;

  SeKernelParams(double lengthscale_, double signal_variance_)
      : lengthscale(lengthscale_), signal_variance(signal_variance_) {
    if (!(lengthscale > 0.0) || !std::isfinite(lengthscale)) {
      throw std::invalid_argument("SeKernelParams: lengthscale must be a positive finite real");
    }
    if (!(signal_variance > 0.0) || !std::isfinite(signal_variance)) {
      throw std::invalid_argument("SeKernelParams: signal_variance must be a positive finite real");
    }
  }
};

// Observation model y = f(x) + eps, eps ~ N(0, noise_variance).
struct NoiseModel {
  double noise_variance;

  explicit NoiseModel(double noise_variance_) : noise_variance(noise_variance_) {
    if (!(noise_variance > 0.0) || !std::isfinite(noise_variance)) {
      throw std::invalid_argument("NoiseModel: noise_variance must be a positive finite real");
    }
  }

  double noise_sd() const { return std::sqrt(noise_variance); }
};

// Point sets are dense matrices with one point per row (n x d).

template <class DerivedA, class DerivedB>
double se_eval(const Eigen::MatrixBase<DerivedA>& x,
               const Eigen::MatrixBase<DerivedB>& x_prime,
               const SeKernelParams& p) {
  if (x.size() != x_prime.size()) {
    throw DimensionMismatch("se_eval: points have dimensions " +
                            std::to_string(x.size()) + " and " +
                            std::to_string(x_prime.size()));
  }
  const double sq_dist = (x - x_prime).squaredNorm();
  return p.signal_variance *
         std::exp(-sq_dist / (2.0 * p.lengthscale * p.lengthscale));
}

// Gram matrix K(i,j) = k(points[i], points[j]); symmetric, diagonal equals
// the signal variance.
Eigen::MatrixXd kernel_matrix(const Eigen::MatrixXd& points,
                              const SeKernelParams& p);

// Rectangular kernel block K(i,j) = k(points_a[i], points_b[j]).
Eigen::MatrixXd cross_kernel(const Eigen::MatrixXd& points_a,
                             const Eigen::MatrixXd& points_b,
                             const SeKernelParams& p);

// Inflates the signal variance to (1 + gamma) * sigma^2 and leaves the
// lengthscale alone. The widened Gram matrix dominates the original in
// Loewner order on any point set.
SeKernelParams widen(const SeKernelParams& p, double gamma);

}  // namespace gpcs

#endif  // GPCS_KERNEL_HPP
