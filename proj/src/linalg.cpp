#include "gpcs/linalg.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace gpcs {

namespace {

bool factor_ok(const Eigen::LLT<Eigen::MatrixXd>& llt) {
  if (llt.info() != Eigen::Success) return false;
  // Eigen can report success on semi-definite inputs; insist on a clean
  // strictly positive diagonal.
  const auto diag = Eigen::MatrixXd(llt.matrixL()).diagonal();
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    if (!(diag[i] > 0.0) || !std::isfinite(diag[i])) return false;
  }
  return true;
}

}  // namespace

SpdFactor cholesky_with_jitter(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) {
    throw DimensionMismatch("cholesky_with_jitter: matrix is " +
                            std::to_string(a.rows()) + "x" +
                            std::to_string(a.cols()));
  }
  const Eigen::MatrixXd sym = 0.5 * (a + a.transpose());
  const double diag_scale = sym.diagonal().mean();

  // eps = 0 first, then 1e-10 .. 1e-6 in decade steps.
  constexpr double kEps[] = {0.0, 1e-10, 1e-9, 1e-8, 1e-7, 1e-6};
  for (double eps : kEps) {
    const double jitter = eps * diag_scale;
    Eigen::MatrixXd shifted = sym;
    if (jitter != 0.0) shifted.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(shifted);
    if (factor_ok(llt)) {
      return SpdFactor{Eigen::MatrixXd(llt.matrixL()), jitter};
    }
  }
  throw NotPositiveDefinite(
      "cholesky_with_jitter: factorization failed at jitter 1e-6 * " +
      std::to_string(diag_scale));
}

double log_det_spd(const SpdFactor& f) {
  return 2.0 * f.lower_factor.diagonal().array().log().sum();
}

double mahalanobis_sq(const SpdFactor& f, const Eigen::VectorXd& delta) {
  if (delta.size() != f.dim()) {
    throw DimensionMismatch("mahalanobis_sq: delta has " +
                            std::to_string(delta.size()) +
                            " entries, factor dim is " +
                            std::to_string(f.dim()));
  }
  Eigen::VectorXd y =
      f.lower_factor.triangularView<Eigen::Lower>().solve(delta);
  return y.squaredNorm();
}

Eigen::VectorXd sample_mvn(const Eigen::VectorXd& mean, const SpdFactor& f,
                           Rng& rng) {
  if (mean.size() != f.dim()) {
    throw DimensionMismatch("sample_mvn: mean has " +
                            std::to_string(mean.size()) +
                            " entries, factor dim is " +
                            std::to_string(f.dim()));
  }
  const Eigen::VectorXd z = standard_normal_vector(rng, f.dim());
  return mean + f.lower_factor.triangularView<Eigen::Lower>() * z;
}

double log_mvn_density(const Eigen::VectorXd& x, const Eigen::VectorXd& mean,
                       const SpdFactor& f) {
  if (x.size() != mean.size() || x.size() != f.dim()) {
    throw DimensionMismatch("log_mvn_density: shape mismatch");
  }
  const double d = static_cast<double>(f.dim());
  return -0.5 * d * std::log(2.0 * std::numbers::pi) - 0.5 * log_det_spd(f) -
         0.5 * mahalanobis_sq(f, x - mean);
}

}  // namespace gpcs
