#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "steerlab/entropy.hpp"
#include "steerlab/moments.hpp"

using namespace steerlab;

namespace {

constexpr double kPi = std::numbers::pi;
const double kLnPiE = std::log(kPi * std::numbers::e);

// Synthetic product-Gaussian grid with the given per-axis variances.
DensityGrid gaussian_grid(double var0, double var1, double half_width, int points) {
  DensityGrid grid{AxisPair::xy, half_width, points,
                   std::vector<double>(static_cast<std::size_t>(points) * points)};
  const double norm = 1.0 / (2.0 * kPi * std::sqrt(var0 * var1));
  for (int i = 0; i < points; ++i)
    for (int j = 0; j < points; ++j) {
      const double a = grid.node(i);
      const double b = grid.node(j);
      grid.values[static_cast<std::size_t>(i) * points + j] =
          norm * std::exp(-0.5 * (a * a / var0 + b * b / var1));
    }
  return grid;
}

}  // namespace

TEST_CASE("gaussian entropy closed forms") {
  // One dimension at the vacuum variance 1/2 gives ln(pi e) / 2.
  CHECK(gaussian_entropy(0.5, 1) == doctest::Approx(0.5 * kLnPiE).epsilon(1e-14));
  CHECK(gaussian_entropy(1.0, 2) ==
        doctest::Approx(std::log(2.0 * kPi * std::numbers::e)).epsilon(1e-14));
  CHECK_THROWS_AS(gaussian_entropy(0.0, 1), std::domain_error);
  CHECK_THROWS_AS(gaussian_entropy(-1.0, 2), std::domain_error);
}

TEST_CASE("gaussian conditional entropy matches the residual variance") {
  const double var_t = 1.3, var_e = 0.8, cov = 0.6;
  const double residual = var_t - cov * cov / var_e;
  CHECK(gaussian_conditional_entropy(var_t, var_e, cov) ==
        doctest::Approx(0.5 * std::log(2.0 * kPi * std::numbers::e * residual))
            .epsilon(1e-14));
  // Zero correlation reduces to the marginal entropy.
  CHECK(gaussian_conditional_entropy(0.5, 1.0, 0.0) ==
        doctest::Approx(0.5 * kLnPiE).epsilon(1e-14));
}

TEST_CASE("grid entropy of a synthetic gaussian") {
  const DensityGrid grid = gaussian_grid(1.0, 0.5, 8.0, 161);
  const double expect =
      gaussian_entropy(1.0, 1) + gaussian_entropy(0.5, 1);
  CHECK(differential_entropy(grid) == doctest::Approx(expect).epsilon(1e-8));

  // Resolution stability: halving the step moves the value negligibly.
  const DensityGrid fine = gaussian_grid(1.0, 0.5, 8.0, 321);
  CHECK(std::abs(differential_entropy(fine) - differential_entropy(grid)) < 1e-8);
}

TEST_CASE("grid entropy rejects unnormalized densities") {
  DensityGrid grid = gaussian_grid(1.0, 1.0, 8.0, 81);
  for (double& v : grid.values) v *= 0.9;
  CHECK_THROWS_AS(differential_entropy(grid), NormalizationError);
}

TEST_CASE("1d entropy of the one-photon position density") {
  // |psi_1(x)|^2 = (2/sqrt(pi)) x^2 exp(-x^2); its differential entropy is a
  // frozen reference value. The rectangle sum converges like step^3 here (the
  // integrand behaves as x^2 log x^2 at the origin), about 1.4e-7 at this
  // resolution, so the tolerance reflects the grid, not the estimator.
  const int n = 1601;
  const double half = 8.0;
  const double step = 2.0 * half / (n - 1);
  std::vector<double> density(n);
  for (int i = 0; i < n; ++i) {
    const double x = -half + i * step;
    density[i] = 2.0 / std::sqrt(kPi) * x * x * std::exp(-x * x);
  }
  CHECK(differential_entropy_1d(density, step) ==
        doctest::Approx(1.3427277882855129).epsilon(1e-6));
}

TEST_CASE("estimator marginal integrates out the target axis") {
  const DensityGrid grid = gaussian_grid(1.0, 0.5, 8.0, 161);
  const std::vector<double> marginal = estimator_marginal(grid);
  REQUIRE(marginal.size() == 161);
  // Must equal the axis-1 Gaussian factor.
  for (int j = 0; j < 161; j += 16) {
    const double b = grid.node(j);
    const double expect =
        std::exp(-0.5 * b * b / 0.5) / std::sqrt(2.0 * kPi * 0.5);
    CHECK(marginal[j] == doctest::Approx(expect).epsilon(1e-9));
  }
  CHECK(differential_entropy_1d(marginal, grid.step()) ==
        doctest::Approx(gaussian_entropy(0.5, 1)).epsilon(1e-9));
}

TEST_CASE("conditional entropy of the squeezed family matches the closed form") {
  const double r = 0.3;
  const double c = std::cosh(2.0 * r);
  const StateDescriptor desc = parse_descriptor("tmsv:r=0.3");
  EntropyOptions opts;
  opts.points = 81;
  const EntropyReport xy = conditional_entropy(desc, AxisPair::xy, opts);
  const EntropyReport pp = conditional_entropy(desc, AxisPair::pxpy, opts);
  // h(X|Y) + h(P_X|P_Y) = ln(pi e / cosh 2r).
  CHECK(xy.conditional + pp.conditional ==
        doctest::Approx(kLnPiE - std::log(c)).epsilon(1e-6));
  CHECK(xy.grid_points == 81);
  CHECK(xy.clamped_mass <= 1e-6);
  // Joint minus estimator is the conditional by construction.
  CHECK(xy.conditional == doctest::Approx(xy.joint - xy.estimator).epsilon(1e-12));
}
