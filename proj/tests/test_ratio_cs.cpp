#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <random>

#include "gpcs/experiments.hpp"
#include "gpcs/ratio_cs.hpp"
#include "support/oracles.hpp"

using gpcs::band_at;
using gpcs::band_on_grid;
using gpcs::BandPoint;
using gpcs::cs_radius;
using gpcs::CsConfig;
using gpcs::Dataset;
using gpcs::GpPrior;
using gpcs::GridGaussian;
using gpcs::NoiseModel;
using gpcs::ratio_gaussian;
using gpcs::RatioGaussian;
using gpcs::SeKernelParams;

namespace {

GpPrior prior_b() { return {SeKernelParams(3.0, 1.0), NoiseModel(0.1), 0.0}; }

// Random posterior/widened-prior pair on a shared grid of m points.
struct Instance {
  GridGaussian posterior;
  GridGaussian widened;
};

Instance random_instance(std::mt19937_64& rng, int m, double gamma) {
  const GpPrior prior{SeKernelParams(1.0, 1.0), NoiseModel(0.1), 0.0};
  const Eigen::MatrixXd grid =
      oracles::separated_points(rng, m, 1, -4, 4, 0.3);
  const int t = static_cast<int>(rng() % 4);
  Dataset data;
  if (t > 0) {
    const Eigen::MatrixXd xs =
        oracles::separated_points(rng, t, 1, -4, 4, 0.3);
    data = Dataset(xs, oracles::random_vector(rng, t));
  }
  Instance inst{
      posterior_on_grid(prior, data, grid),
      prior_on_grid(GpPrior{gpcs::widen(prior.kernel, gamma), prior.noise,
                            prior.mean_value},
                    grid)};
  return inst;
}

// Outward traversal from mu_c to the isocontour where the scaled density
// crosses the threshold, bisected to high precision.
double traversal_radius(const RatioGaussian& r, const CsConfig& cfg) {
  const double m = static_cast<double>(r.mu_c.size());
  const double log_threshold = std::log(cfg.alpha) / cfg.beta_power;
  auto log_density_at = [&](double k) {
    return r.log_c - 0.5 * m * std::log(2.0 * std::numbers::pi) -
           0.5 * r.log_det_sigma_c - 0.5 * k * k;
  };
  double lo = 0.0;
  double hi = 0.5;
  while (log_density_at(hi) > log_threshold) {
    lo = hi;
    hi *= 2.0;
  }
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (log_density_at(mid) > log_threshold ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("ratio_gaussian: prior-only scalar case") {
  Eigen::MatrixXd grid(1, 1);
  grid << 0.0;
  const GpPrior prior{SeKernelParams(1.0, 1.0), NoiseModel(0.1), 0.0};
  const GridGaussian post = posterior_on_grid(prior, Dataset(), grid);
  const GridGaussian wide = prior_on_grid(
      GpPrior{gpcs::widen(prior.kernel, 0.01), prior.noise, 0.0}, grid);
  const RatioGaussian r = ratio_gaussian(post, wide);
  // (1/sigma^2 - 1/(sigma^2 (1+gamma)))^{-1} = sigma^2 (1+gamma)/gamma
  CHECK(r.sigma_c(0, 0) == doctest::Approx(101.0).epsilon(1e-9));
  CHECK(std::abs(r.mu_c[0]) < 1e-12);
}

TEST_CASE("ratio_gaussian: hand-expanded scalar ratio N(0,1)/N(0,2)") {
  Eigen::MatrixXd grid(1, 1);
  grid << 0.0;
  const GridGaussian post(grid, Eigen::VectorXd::Zero(1),
                          (Eigen::MatrixXd(1, 1) << 1.0).finished());
  const GridGaussian wide(grid, Eigen::VectorXd::Zero(1),
                          (Eigen::MatrixXd(1, 1) << 2.0).finished());
  const RatioGaussian r = ratio_gaussian(post, wide);
  CHECK(r.sigma_c(0, 0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::abs(r.mu_c[0]) < 1e-14);
  CHECK(r.log_c ==
        doctest::Approx(std::log(std::sqrt(8.0 * std::numbers::pi)))
            .epsilon(1e-12));
}

TEST_CASE("ratio_gaussian: grid mismatch is rejected") {
  Eigen::MatrixXd g1(1, 1), g2(1, 1);
  g1 << 0.0;
  g2 << 1.0;
  const GridGaussian a(g1, Eigen::VectorXd::Zero(1),
                       (Eigen::MatrixXd(1, 1) << 1.0).finished());
  const GridGaussian b(g2, Eigen::VectorXd::Zero(1),
                       (Eigen::MatrixXd(1, 1) << 2.0).finished());
  CHECK_THROWS_AS(ratio_gaussian(a, b), gpcs::GridMismatch);
}

TEST_CASE("ratio_gaussian: widened prior equal to posterior is degenerate") {
  Eigen::MatrixXd grid(1, 1);
  grid << 0.0;
  const GridGaussian same(grid, Eigen::VectorXd::Zero(1),
                          (Eigen::MatrixXd(1, 1) << 1.0).finished());
  CHECK_THROWS_AS(ratio_gaussian(same, same), gpcs::NotPositiveDefinite);
}

TEST_CASE("ratio_gaussian: density-ratio identity at random vectors") {
  std::mt19937_64 rng(83);
  for (int m = 1; m <= 8; ++m) {
    for (double gamma : {1e-2, 1e-1}) {
      const Instance inst = random_instance(rng, m, gamma);
      const RatioGaussian r = ratio_gaussian(inst.posterior, inst.widened);
      const gpcs::SpdFactor f_post =
          gpcs::cholesky_with_jitter(inst.posterior.cov);
      const gpcs::SpdFactor f_wide =
          gpcs::cholesky_with_jitter(inst.widened.cov);
      const gpcs::SpdFactor f_ratio = gpcs::cholesky_with_jitter(r.sigma_c);
      for (int k = 0; k < 20; ++k) {
        const Eigen::VectorXd f = oracles::random_vector(rng, m, 1.5);
        const double lhs =
            gpcs::log_mvn_density(f, inst.posterior.mean, f_post) -
            gpcs::log_mvn_density(f, inst.widened.mean, f_wide);
        const double rhs =
            r.log_c + gpcs::log_mvn_density(f, r.mu_c, f_ratio);
        CHECK(std::abs(lhs - rhs) < 1e-8);
      }
    }
  }
}

TEST_CASE("cs_radius: scalar closed form, unpowered and powered") {
  Eigen::MatrixXd grid(1, 1);
  grid << 0.0;
  RatioGaussian r{grid, Eigen::VectorXd::Zero(1),
                  Eigen::MatrixXd::Identity(1, 1),
                  0.5 * std::log(2.0 * std::numbers::pi) + 2.0, 0.0};
  const double k1 = cs_radius(r, CsConfig(0.05, 1e-2, 1.0));
  CHECK(k1 == doctest::Approx(std::sqrt(2.0 * (2.0 - std::log(0.05))))
                  .epsilon(1e-12));
  CHECK(k1 == doctest::Approx(3.1610).epsilon(1e-4));

  const double k075 = cs_radius(r, CsConfig(0.05, 1e-2, 0.75));
  CHECK(k075 ==
        doctest::Approx(std::sqrt(2.0 * (2.0 - std::log(0.05) / 0.75)))
            .epsilon(1e-12));
  CHECK(k075 > k1);
}

TEST_CASE("cs_radius: empty confidence set when the peak is below threshold") {
  Eigen::MatrixXd grid(1, 1);
  grid << 0.0;
  const RatioGaussian r{grid, Eigen::VectorXd::Zero(1),
                        Eigen::MatrixXd::Identity(1, 1), -10.0, 0.0};
  CHECK_THROWS_AS(cs_radius(r, CsConfig(0.05, 1e-2, 1.0)),
                  gpcs::EmptyConfidenceSet);
}

TEST_CASE("cs_radius: agrees with the outward-traversal oracle") {
  std::mt19937_64 rng(89);
  for (int trial = 0; trial < 10; ++trial) {
    const int m = 1 + static_cast<int>(rng() % 6);
    const Instance inst = random_instance(rng, m, 1e-2);
    const RatioGaussian r = ratio_gaussian(inst.posterior, inst.widened);
    const CsConfig cfg(0.05, 1e-2, trial % 2 == 0 ? 1.0 : 0.75);
    CHECK(cs_radius(r, cfg) ==
          doctest::Approx(traversal_radius(r, cfg)).epsilon(1e-6));
  }
}

TEST_CASE("band_at: interval is symmetric with the constructed width") {
  std::mt19937_64 rng(97);
  const Eigen::MatrixXd xs = oracles::separated_points(rng, 4, 1, -8, 8, 0.5);
  const Dataset data(xs, oracles::random_vector(rng, 4));
  const CsConfig cfg;
  Eigen::VectorXd x_test(1);
  x_test << 2.5;
  const BandPoint band = band_at(prior_b(), data, x_test, cfg);

  CHECK(band.lower <= band.upper);
  const double center = 0.5 * (band.lower + band.upper);
  CHECK(band.lower <= center);
  CHECK(center <= band.upper);

  // Recompute the projection width from the pieces.
  Eigen::MatrixXd grid(5, 1);
  grid.topRows(4) = xs;
  grid.row(4) = x_test.transpose();
  const RatioGaussian r = ratio_gaussian(prior_b(), data, grid, cfg.gamma);
  const double k = cs_radius(r, cfg);
  CHECK(band.radius_k == k);
  CHECK(band.upper - band.lower == 2.0 * k * std::sqrt(r.sigma_c(4, 4)));
  CHECK(band.lower == r.mu_c[4] - k * std::sqrt(r.sigma_c(4, 4)));
}

TEST_CASE("ratio_gaussian: data route and gaussian-pair route agree") {
  std::mt19937_64 rng(131);
  for (int trial = 0; trial < 8; ++trial) {
    const GpPrior prior{SeKernelParams(1.0, 1.2), NoiseModel(0.1), 0.1};
    const int t = 1 + static_cast<int>(rng() % 4);
    const double gamma = trial % 2 == 0 ? 1e-2 : 1e-1;
    const Eigen::MatrixXd xs =
        oracles::separated_points(rng, t, 1, -4, 4, 0.4);
    const Dataset data(xs, oracles::random_vector(rng, t));

    // Grid = observed points plus two fresh ones.
    Eigen::MatrixXd grid(t + 2, 1);
    grid.topRows(t) = xs;
    grid(t, 0) = 4.7;
    grid(t + 1, 0) = -4.9;

    const RatioGaussian from_data = ratio_gaussian(prior, data, grid, gamma);
    const GridGaussian post = posterior_on_grid(prior, data, grid);
    const GridGaussian wide = prior_on_grid(
        GpPrior{gpcs::widen(prior.kernel, gamma), prior.noise,
                prior.mean_value},
        grid);
    const RatioGaussian from_pair = ratio_gaussian(post, wide);

    CHECK((from_data.mu_c - from_pair.mu_c).lpNorm<Eigen::Infinity>() < 1e-8);
    CHECK((from_data.sigma_c - from_pair.sigma_c).lpNorm<Eigen::Infinity>() <
          1e-6 * from_pair.sigma_c.norm());
    CHECK(from_data.log_c ==
          doctest::Approx(from_pair.log_c).epsilon(1e-8));
    const CsConfig cfg(0.05, gamma, 1.0);
    CHECK(cs_radius(from_data, cfg) ==
          doctest::Approx(cs_radius(from_pair, cfg)).epsilon(1e-8));
  }
}

TEST_CASE("ratio_gaussian: data route requires the grid to cover the data") {
  const GpPrior prior{SeKernelParams(1.0, 1.0), NoiseModel(0.1), 0.0};
  Eigen::MatrixXd xs(1, 1);
  xs << 0.5;
  Eigen::VectorXd ys(1);
  ys << 1.0;
  Eigen::MatrixXd grid(1, 1);
  grid << 2.0;
  CHECK_THROWS_AS(ratio_gaussian(prior, Dataset(xs, ys), grid, 1e-2),
                  gpcs::GridMismatch);
}

TEST_CASE("ratio_gaussian: data route survives a dense collinear grid") {
  // Sixty observations with a lengthscale-3 kernel make the grid Gram
  // numerically singular; the data-side reduction must still produce a
  // finite band.
  std::mt19937_64 rng(137);
  const int t = 60;
  Eigen::MatrixXd xs(t, 1);
  for (int i = 0; i < t; ++i) xs(i, 0) = oracles::random_vector(rng, 1)[0] * 5.0;
  Eigen::VectorXd ys = oracles::random_vector(rng, t);
  const Dataset data(xs, ys);
  const CsConfig cfg;
  Eigen::VectorXd x_test(1);
  x_test << 0.33;
  const BandPoint band = band_at(prior_b(), data, x_test, cfg);
  CHECK(std::isfinite(band.lower));
  CHECK(std::isfinite(band.upper));
  CHECK(band.lower < band.upper);
  CHECK(band.radius_k > 0.0);
}

TEST_CASE("band_at: projection endpoints match rejection sampling in 2-D") {
  std::mt19937_64 rng(101);
  Eigen::MatrixXd xs(1, 1);
  xs << -0.5;
  Eigen::VectorXd ys(1);
  ys << 0.7;
  const Dataset data(xs, ys);
  const GpPrior prior{SeKernelParams(1.0, 1.0), NoiseModel(0.1), 0.0};
  // A generous gamma and alpha keep the ellipsoid small enough for the
  // sampler to resolve its extremes at the checked tolerance.
  const CsConfig cfg(0.2, 0.5, 1.0);
  Eigen::VectorXd x_test(1);
  x_test << 0.4;
  const BandPoint band = band_at(prior, data, x_test, cfg);

  Eigen::MatrixXd grid(2, 1);
  grid << -0.5, 0.4;
  const GridGaussian post = posterior_on_grid(prior, data, grid);
  const GridGaussian wide = prior_on_grid(
      GpPrior{gpcs::widen(prior.kernel, cfg.gamma), prior.noise, 0.0}, grid);
  const RatioGaussian r = ratio_gaussian(post, wide);
  const double k = cs_radius(r, cfg);
  const Eigen::MatrixXd precision = oracles::adjugate_inverse(r.sigma_c);

  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double half0 = k * std::sqrt(r.sigma_c(0, 0));
  const double half1 = k * std::sqrt(r.sigma_c(1, 1));
  double min1 = 1e300;
  double max1 = -1e300;
  for (int s = 0; s < 1000000; ++s) {
    Eigen::Vector2d delta(half0 * unit(rng), half1 * unit(rng));
    if (delta.dot(precision * delta) <= k * k) {
      min1 = std::min(min1, r.mu_c[1] + delta[1]);
      max1 = std::max(max1, r.mu_c[1] + delta[1]);
    }
  }
  CHECK(std::abs(min1 - band.lower) < 0.01);
  CHECK(std::abs(max1 - band.upper) < 0.01);
}

TEST_CASE("band_on_grid: empty grid, singleton, and per-point recomputation") {
  std::mt19937_64 rng(103);
  const Eigen::MatrixXd xs = oracles::separated_points(rng, 5, 1, -8, 8, 0.5);
  const Dataset data(xs, oracles::random_vector(rng, 5));
  const CsConfig cfg;

  CHECK(band_on_grid(prior_b(), data, Eigen::MatrixXd(0, 1), cfg).empty());

  Eigen::MatrixXd single(1, 1);
  single << 1.0;
  const auto singleton = band_on_grid(prior_b(), data, single, cfg);
  const BandPoint direct = band_at(prior_b(), data, single.row(0), cfg);
  REQUIRE(singleton.size() == 1);
  CHECK(singleton[0].lower == direct.lower);
  CHECK(singleton[0].upper == direct.upper);

  const Eigen::MatrixXd plot = gpcs::linspace_grid(-10.0, 10.0, 50);
  const auto bands = band_on_grid(prior_b(), data, plot, cfg);
  REQUIRE(bands.size() == 50);
  for (int j = 0; j < 50; ++j) {
    const BandPoint fresh = band_at(prior_b(), data, plot.row(j), cfg);
    CHECK(bands[static_cast<std::size_t>(j)].lower == fresh.lower);
    CHECK(bands[static_cast<std::size_t>(j)].upper == fresh.upper);
    CHECK(bands[static_cast<std::size_t>(j)].radius_k == fresh.radius_k);
  }
}

TEST_CASE("property: band width is nonincreasing in the likelihood power") {
  std::mt19937_64 rng(107);
  const Eigen::MatrixXd xs = oracles::separated_points(rng, 6, 1, -8, 8, 0.5);
  const Dataset data(xs, oracles::random_vector(rng, 6));
  const Eigen::MatrixXd plot = gpcs::linspace_grid(-10.0, 10.0, 20);

  std::vector<std::vector<BandPoint>> by_beta;
  for (double beta : {0.5, 0.75, 1.0}) {
    by_beta.push_back(
        band_on_grid(prior_b(), data, plot, CsConfig(0.05, 1e-2, beta)));
  }
  for (std::size_t j = 0; j < 20; ++j) {
    const double w_half = by_beta[0][j].upper - by_beta[0][j].lower;
    const double w_three_quarters = by_beta[1][j].upper - by_beta[1][j].lower;
    const double w_one = by_beta[2][j].upper - by_beta[2][j].lower;
    CHECK(w_half >= w_three_quarters);
    CHECK(w_three_quarters >= w_one);
  }
}

TEST_CASE("property: empty-data band is symmetric about zero") {
  const CsConfig cfg;
  for (double x : {-7.0, -1.0, 0.0, 2.5, 9.0}) {
    Eigen::VectorXd x_test(1);
    x_test << x;
    const BandPoint band = band_at(prior_b(), Dataset(), x_test, cfg);
    CHECK(std::abs(band.lower + band.upper) < 1e-9);
    CHECK(band.upper > 0.0);
  }
}

TEST_CASE("band_at: observed and re-queried locations enter the grid once") {
  std::mt19937_64 rng(211);
  // Two observations at the same location plus one elsewhere.
  Eigen::MatrixXd xs(3, 1);
  xs << 1.5, -2.0, 1.5;
  Eigen::VectorXd ys(3);
  ys << 0.4, -0.3, 0.6;
  const Dataset data(xs, ys);
  const CsConfig cfg;

  // Band at an already-observed point.
  Eigen::VectorXd at_observed(1);
  at_observed << 1.5;
  const BandPoint on_data = band_at(prior_b(), data, at_observed, cfg);
  CHECK(on_data.lower < on_data.upper);
  CHECK(std::isfinite(on_data.radius_k));

  // Band elsewhere; the duplicated observation still informs it.
  Eigen::VectorXd elsewhere(1);
  elsewhere << 0.0;
  const BandPoint off_data = band_at(prior_b(), data, elsewhere, cfg);
  CHECK(off_data.lower < off_data.upper);

  // Dropping the duplicate observation must widen the band at 1.5: the
  // grid is the same but the posterior sees one fewer measurement.
  const BandPoint fewer = band_at(prior_b(), data.prefix(2), at_observed, cfg);
  CHECK(on_data.upper - on_data.lower < fewer.upper - fewer.lower);
}

TEST_CASE("property: sigma_c stays positive definite under the contract") {
  std::mt19937_64 rng(109);
  for (int trial = 0; trial < 10; ++trial) {
    const int m = 2 + static_cast<int>(rng() % 7);
    const Instance inst = random_instance(rng, m, 1e-4);
    CHECK_NOTHROW(ratio_gaussian(inst.posterior, inst.widened));
  }
}
