#include "gpcs/kernel.hpp"

namespace gpcs {

Eigen::MatrixXd kernel_matrix(const Eigen::MatrixXd& points,
                              const SeKernelParams& p) {
  const Eigen::Index n = points.rows();
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    k(i, i) = p.signal_variance;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = se_eval(points.row(i), points.row(j), p);
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

Eigen::MatrixXd cross_kernel(const Eigen::MatrixXd& points_a,
                             const Eigen::MatrixXd& points_b,
                             const SeKernelParams& p) {
  if (points_a.cols() != points_b.cols()) {
    throw DimensionMismatch("cross_kernel: point sets have dimensions " +
                            std::to_string(points_a.cols()) + " and " +
                            std::to_string(points_b.cols()));
  }
  Eigen::MatrixXd k(points_a.rows(), points_b.rows());
  for (Eigen::Index i = 0; i < points_a.rows(); ++i) {
    for (Eigen::Index j = 0; j < points_b.rows(); ++j) {
      k(i, j) = se_eval(points_a.row(i), points_b.row(j), p);
    }
  }
  return k;
}

SeKernelParams widen(const SeKernelParams& p, double gamma) {
  if (gamma < 0.0) {
    throw NegativeGamma("widen: gamma must be nonnegative, got " +
                        std::to_string(gamma));
  }
  return SeKernelParams(p.lengthscale, p.signal_variance * (1.0 + gamma));
}

}  // namespace gpcs
