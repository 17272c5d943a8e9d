#ifndef GPCS_LINALG_HPP
#define GPCS_LINALG_HPP

#include <Eigen/Dense>

#include "gpcs/errors.hpp"
#include "gpcs/rng.hpp"

namespace gpcs {

// Lower-triangular Cholesky factor of a symmetric positive definite
// matrix, plus the diagonal inflation that was needed to obtain it.
// L * L^T reconstructs (input + jitter_applied * I).
struct SpdFactor {
  Eigen::MatrixXd lower_factor;
  double jitter_applied = 0.0;

  Eigen::Index dim() const { return lower_factor.rows(); }
};

// Factors (a + a^T)/2, escalating the diagonal inflation through
// eps * mean(diag(a)) for eps in {0, 1e-10, ..., 1e-6} until the
// factorization succeeds with a strictly positive, finite diagonal.
// Throws NotPositiveDefinite if even eps = 1e-6 fails.
SpdFactor cholesky_with_jitter(const Eigen::MatrixXd& a);

// Solves (L L^T) x = b via two triangular solves. b may be a vector or a
// matrix of right-hand sides.
template <class Derived>
typename Derived::PlainObject solve_spd(const SpdFactor& f,
                                        const Eigen::MatrixBase<Derived>& b) {
  if (b.rows() != f.dim()) {
    throw DimensionMismatch("solve_spd: rhs has " + std::to_string(b.rows()) +
                            " rows, factor dim is " + std::to_string(f.dim()));
  }
  typename Derived::PlainObject x = b;
  f.lower_factor.template triangularView<Eigen::Lower>().solveInPlace(x);
  f.lower_factor.template triangularView<Eigen::Lower>()
      .transpose()
      .solveInPlace(x);
  return x;
}

// log det(L L^T) = 2 sum_i log L(i,i).
double log_det_spd(const SpdFactor& f);

// delta^T (L L^T)^{-1} delta, via one triangular solve.
double mahalanobis_sq(const SpdFactor& f, const Eigen::VectorXd& delta);

// mean + L z with z ~ N(0, I) drawn from rng.
Eigen::VectorXd sample_mvn(const Eigen::VectorXd& mean, const SpdFactor& f,
                           Rng& rng);

// log N(x | mean, L L^T).
double log_mvn_density(const Eigen::VectorXd& x, const Eigen::VectorXd& mean,
                       const SpdFactor& f);

}  // namespace gpcs

#endif  // GPCS_LINALG_HPP
