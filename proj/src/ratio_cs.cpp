#include "gpcs/ratio_cs.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>

#include "gpcs/parallel.hpp"

namespace gpcs {

CsConfig::CsConfig(double alpha_, double gamma_, double beta_power_)
    : alpha(alpha_), gamma(gamma_), beta_power(beta_power_) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    throw ConfigError("CsConfig: alpha must lie in (0, 1)");
  }
  if (!(gamma > 0.0)) {
    throw ConfigError("CsConfig: gamma must be positive");
  }
  if (!(beta_power > 0.0) || !(beta_power <= 1.0)) {
    throw ConfigError("CsConfig: beta_power must lie in (0, 1]");
  }
}

RatioGaussian ratio_gaussian(const GridGaussian& posterior,
                             const GridGaussian& widened_prior) {
  if (posterior.grid.rows() != widened_prior.grid.rows() ||
      posterior.grid.cols() != widened_prior.grid.cols() ||
      posterior.grid != widened_prior.grid) {
    throw GridMismatch("ratio_gaussian: posterior and widened prior are on different grids");
  }
  const Eigen::Index m = posterior.size();
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(m, m);

  const SpdFactor f_post = cholesky_with_jitter(posterior.cov);
  const SpdFactor f_wide = cholesky_with_jitter(widened_prior.cov);

  const Eigen::MatrixXd post_inv = solve_spd(f_post, identity);
  const Eigen::MatrixXd wide_inv = solve_spd(f_wide, identity);

  // Precision of the ratio Gaussian; positive definite whenever the
  // widened prior strictly dominates the posterior.
  Eigen::MatrixXd precision = post_inv - wide_inv;
  precision = 0.5 * (precision + precision.transpose()).eval();
  SpdFactor f_prec;
  try {
    f_prec = cholesky_with_jitter(precision);
  } catch (const NotPositiveDefinite&) {
    throw NotPositiveDefinite(
        "ratio_gaussian: K_t^{-1} - K0~^{-1} is not positive definite "
        "(gamma too small for the conditioning of this grid)");
  }

  const Eigen::VectorXd post_pull = solve_spd(f_post, posterior.mean);
  const Eigen::VectorXd wide_pull = solve_spd(f_wide, widened_prior.mean);
  const Eigen::VectorXd natural_mean = post_pull - wide_pull;
  const Eigen::VectorXd mu_c = solve_spd(f_prec, natural_mean);

  Eigen::MatrixXd sigma_c = solve_spd(f_prec, identity);
  sigma_c = 0.5 * (sigma_c + sigma_c.transpose()).eval();
  const double log_det_sigma_c = -log_det_spd(f_prec);

  // Normalizer from the defining identity, expanded in log space:
  // completing the square in f leaves the constant below.
  const double log_c =
      0.5 * (log_det_spd(f_wide) - log_det_spd(f_post) + log_det_sigma_c) +
      0.5 * static_cast<double>(m) * std::log(2.0 * std::numbers::pi) +
      0.5 * (mu_c.dot(natural_mean) - posterior.mean.dot(post_pull) +
             widened_prior.mean.dot(wide_pull));

  return RatioGaussian{posterior.grid, mu_c, std::move(sigma_c), log_c,
                       log_det_sigma_c};
}

RatioGaussian ratio_gaussian(const GpPrior& prior, const Dataset& data,
                             const Eigen::MatrixXd& grid, double gamma) {
  if (gamma <= 0.0) {
    throw NegativeGamma("ratio_gaussian: gamma must be positive");
  }
  const Eigen::Index m = grid.rows();
  const Eigen::Index t = data.size();
  if (m == 0) throw EmptyGrid("ratio_gaussian: empty grid");
  for (Eigen::Index i = 0; i < t; ++i) {
    bool found = false;
    for (Eigen::Index j = 0; j < m; ++j) {
      if (grid.row(j) == data.xs.row(i)) {
        found = true;
        break;
      }
    }
    if (!found) {
      throw GridMismatch(
          "ratio_gaussian: grid must contain every observed point");
    }
  }

  const double gamma_frac = gamma / (1.0 + gamma);
  const double ridge = gamma_frac * prior.noise.noise_variance;
  const Eigen::MatrixXd k_grid = kernel_matrix(grid, prior.kernel);

  Eigen::VectorXd mu_c = Eigen::VectorXd::Constant(m, prior.mean_value);
  Eigen::MatrixXd sigma_c = k_grid / gamma_frac;
  double quad = 0.0;
  if (t > 0) {
    Eigen::MatrixXd a = kernel_matrix(data.xs, prior.kernel);
    a.diagonal().array() += ridge;
    const SpdFactor f_a = cholesky_with_jitter(a);
    const Eigen::VectorXd centered =
        data.ys - Eigen::VectorXd::Constant(t, prior.mean_value);
    const Eigen::VectorXd pull = solve_spd(f_a, centered);
    const Eigen::MatrixXd k_cross = cross_kernel(grid, data.xs, prior.kernel);
    mu_c += k_cross * pull;
    sigma_c -= k_cross * solve_spd(f_a, k_cross.transpose()) / gamma_frac;
    quad = centered.dot(pull);
  }
  sigma_c = 0.5 * (sigma_c + sigma_c.transpose()).eval();

  // Peak of the density ratio over f; bounded below by (m/2) log(1+gamma),
  // so the confidence set from this route is never empty.
  const double log_peak =
      -log_marginal_likelihood(prior, data) +
      0.5 * static_cast<double>(m) * std::log1p(gamma) -
      0.5 * static_cast<double>(t) *
          std::log(2.0 * std::numbers::pi * prior.noise.noise_variance) -
      0.5 * gamma_frac * quad;

  const double log_det_sigma_c = log_det_spd(cholesky_with_jitter(sigma_c));
  const double log_c =
      log_peak +
      0.5 * static_cast<double>(m) * std::log(2.0 * std::numbers::pi) +
      0.5 * log_det_sigma_c;
  return RatioGaussian{grid, std::move(mu_c), std::move(sigma_c), log_c,
                       log_det_sigma_c};
}

double cs_radius(const RatioGaussian& r, const CsConfig& cfg) {
  const double m = static_cast<double>(r.mu_c.size());
  const double log_density_at_center =
      r.log_c - 0.5 * m * std::log(2.0 * std::numbers::pi) -
      0.5 * r.log_det_sigma_c;
  const double log_threshold = std::log(cfg.alpha) / cfg.beta_power;
  const double bracket = log_density_at_center - log_threshold;
  if (bracket < 0.0) {
    std::ostringstream msg;
    msg << "cs_radius: confidence set is empty (peak log density "
        << log_density_at_center << " below threshold " << log_threshold
        << ")";
    throw EmptyConfidenceSet(msg.str());
  }
  return std::sqrt(2.0 * bracket);
}

BandPoint band_at(const GpPrior& prior, const Dataset& data,
                  const Eigen::VectorXd& x_test, const CsConfig& cfg) {
  if (!data.empty() && x_test.size() != data.point_dim()) {
    throw DimensionMismatch("band_at: test point dimension " +
                            std::to_string(x_test.size()) +
                            " vs data dimension " +
                            std::to_string(data.point_dim()));
  }
  // Set union of the observed points and the test point: re-queried
  // locations collapse to one grid row each, so the grid stays a set of
  // distinct points while the dataset keeps every observation.
  const Eigen::Index t = data.size();
  Eigen::MatrixXd grid(t + 1, x_test.size());
  Eigen::Index rows = 0;
  Eigen::Index test_index = -1;
  auto push_unique = [&grid, &rows](const Eigen::RowVectorXd& row) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      if (grid.row(i) == row) return i;
    }
    grid.row(rows) = row;
    return rows++;
  };
  for (Eigen::Index i = 0; i < t; ++i) push_unique(data.xs.row(i));
  test_index = push_unique(x_test.transpose());
  grid.conservativeResize(rows, Eigen::NoChange);

  const RatioGaussian r = ratio_gaussian(prior, data, grid, cfg.gamma);
  const double k = cs_radius(r, cfg);
  const Eigen::Index j = test_index;
  const double half_width = k * std::sqrt(std::max(r.sigma_c(j, j), 0.0));
  return BandPoint{x_test, r.mu_c[j] - half_width, r.mu_c[j] + half_width, k};
}

std::vector<BandPoint> band_on_grid(const GpPrior& prior, const Dataset& data,
                                    const Eigen::MatrixXd& plot_grid,
                                    const CsConfig& cfg) {
  const Eigen::Index n = plot_grid.rows();
  std::vector<BandPoint> bands(
      static_cast<std::size_t>(n),
      BandPoint{Eigen::VectorXd(), 0.0, 0.0, 0.0});
  std::vector<std::string> failures(static_cast<std::size_t>(n));
  enum class Kind { none, empty_cs, not_pd, other };
  std::vector<Kind> kinds(static_cast<std::size_t>(n), Kind::none);

  parallel_for_index(static_cast<std::size_t>(n), [&](std::size_t i) {
    const Eigen::VectorXd x = plot_grid.row(static_cast<Eigen::Index>(i));
    try {
      bands[i] = band_at(prior, data, x, cfg);
    } catch (const Error& e) {
      std::ostringstream msg;
      msg << "x = [" << x.transpose() << "]: " << e.what();
      failures[i] = msg.str();
      if (dynamic_cast<const EmptyConfidenceSet*>(&e) != nullptr) {
        kinds[i] = Kind::empty_cs;
      } else if (dynamic_cast<const NotPositiveDefinite*>(&e) != nullptr) {
        kinds[i] = Kind::not_pd;
      } else {
        kinds[i] = Kind::other;
      }
    }
  });

  std::string combined;
  Kind first = Kind::none;
  for (std::size_t i = 0; i < failures.size(); ++i) {
    if (failures[i].empty()) continue;
    if (first == Kind::none) first = kinds[i];
    combined += (combined.empty() ? "" : "; ") + failures[i];
  }
  if (first != Kind::none) {
    const std::string what = "band_on_grid: " + combined;
    if (first == Kind::empty_cs) throw EmptyConfidenceSet(what);
    if (first == Kind::not_pd) throw NotPositiveDefinite(what);
    throw Error(what);
  }
  return bands;
}

}  // namespace gpcs
