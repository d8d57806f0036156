#include "doctest.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "steerlab/moments.hpp"

using namespace steerlab;

namespace {
constexpr double kPi = std::numbers::pi;
const double kHalfPi = kPi / 2.0;
}  // namespace

TEST_CASE("settings normalize angles into one turn") {
  const QuadratureSettings s(-kHalfPi, 2.0 * kPi + 0.25, 7.0 * kPi, 0.0);
  CHECK(s.theta1 == doctest::Approx(1.5 * kPi));
  CHECK(s.theta2 == doctest::Approx(0.25));
  CHECK(s.phi1 == doctest::Approx(kPi));
  CHECK(s.phi2 == doctest::Approx(0.0));
  CHECK_THROWS_AS(QuadratureSettings(std::nan(""), 0, 0, 0), std::invalid_argument);
}

TEST_CASE("rotated quadratures recover the base axes") {
  const PhaseSpacePoint p{1.0, 2.0, 3.0, 4.0};
  CHECK(rotated_quadrature(p, 1, 0.0) == doctest::Approx(1.0));
  CHECK(rotated_quadrature(p, 1, kHalfPi) == doctest::Approx(2.0));
  CHECK(rotated_quadrature(p, 2, 0.0) == doctest::Approx(3.0));
  CHECK(rotated_quadrature(p, 2, kHalfPi) == doctest::Approx(4.0));
  CHECK(rotated_quadrature(p, 1, kPi / 4.0) ==
        doctest::Approx((1.0 + 2.0) / std::sqrt(2.0)));
  CHECK_THROWS_AS(rotated_quadrature(p, 3, 0.0), std::invalid_argument);
}

TEST_CASE("analytic moments of the squeezed-vacuum family") {
  const double r = 0.5;
  const double c = std::cosh(2.0 * r);
  const double s = std::sinh(2.0 * r);
  const MomentTable t = MomentTable::analytic(Tmsv{r});
  for (int i = 0; i < 4; ++i) {
    CHECK(t.mean(i) == 0.0);
    CHECK(t.cov(i, i) == doctest::Approx(0.5 * c));
  }
  CHECK(t.cov(0, 2) == doctest::Approx(0.5 * s));
  CHECK(t.cov(1, 3) == doctest::Approx(-0.5 * s));
  CHECK(t.cov(0, 1) == doctest::Approx(0.0));
  CHECK(t.provenance() == Provenance::analytic);
  CHECK(t.mass() == doctest::Approx(1.0));
}

TEST_CASE("analytic moments of the subtracted and vortex families") {
  const double r = 0.3;
  const double c = std::cosh(2.0 * r);
  const double s = std::sinh(2.0 * r);
  const MomentTable ps = MomentTable::analytic(PhotonSubtracted{r});
  CHECK(ps.cov(0, 0) == doctest::Approx(c - 0.5 * s));
  CHECK(ps.cov(2, 2) == doctest::Approx(c - 0.5 * s));
  CHECK(ps.cov(1, 1) == doctest::Approx(c + 0.5 * s));
  CHECK(ps.cov(0, 2) == doctest::Approx(s - 0.5 * c));
  CHECK(ps.cov(1, 3) == doctest::Approx(-(s + 0.5 * c)));

  const MomentTable lg = MomentTable::analytic(LaguerreGauss{0, 2});
  for (int i = 0; i < 4; ++i) CHECK(lg.cov(i, i) == doctest::Approx(1.5));
  CHECK(lg.cov(0, 3) == doctest::Approx(-1.0));
  CHECK(lg.cov(1, 2) == doctest::Approx(1.0));
  CHECK(lg.cov(0, 2) == doctest::Approx(0.0));
}

TEST_CASE("quadrature moments agree with the closed forms") {
  const StateDescriptor desc = parse_descriptor("tmsv:r=0.3");
  const MomentTable num =
      MomentTable::from_quadrature(desc, IntegrationBox(6.0 * std::sqrt(std::cosh(0.6)), 41));
  const MomentTable ref = MomentTable::analytic(desc);
  for (int i = 0; i < 4; ++i) {
    CHECK(std::abs(num.mean(i)) < 1e-8);
    for (int j = 0; j < 4; ++j)
      CHECK(std::abs(num.cov(i, j) - ref.cov(i, j)) < 1e-6);
  }
  CHECK(num.provenance() == Provenance::quadrature);
  CHECK(num.grid_points() == 41);
  CHECK(std::abs(num.mass() - 1.0) < 1e-6);
}

TEST_CASE("correlation and inferred variance on the squeezed family") {
  const double r = 0.5;
  const double c = std::cosh(2.0 * r);
  const MomentTable t = MomentTable::analytic(Tmsv{r});
  CHECK(correlation(t, 0.0, 0.0) == doctest::Approx(std::tanh(2.0 * r)));
  CHECK(correlation(t, kHalfPi, kHalfPi) == doctest::Approx(-std::tanh(2.0 * r)));
  // X and P_Y are uncorrelated in this family.
  CHECK(correlation(t, 0.0, kHalfPi) == doctest::Approx(0.0));
  CHECK(inferred_variance(t, 0.0, 0.0) == doctest::Approx(1.0 / (2.0 * c)));
  CHECK(inferred_variance(t, kHalfPi, kHalfPi) == doctest::Approx(1.0 / (2.0 * c)));
  CHECK(sum_uncertainty_bound(t, 0.0, kHalfPi) == doctest::Approx(std::sqrt(2.0 * c)));
}

TEST_CASE("sum of deviations dominates the deviation of the sum") {
  // Property over random raw tables with a valid covariance structure.
  detail::SplitMix64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    double mean[4];
    for (double& m : mean) m = 2.0 * rng.unit() - 1.0;
    // Random PSD covariance: A A^T from a random 4x4.
    double a[4][4];
    for (auto& row : a)
      for (double& v : row) v = 2.0 * rng.unit() - 1.0;
    double cov[4][4] = {};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) cov[i][j] += a[i][k] * a[j][k];
    double second[4][4];
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) second[i][j] = cov[i][j] + mean[i] * mean[j];
    const MomentTable t = MomentTable::from_raw(mean, second, Provenance::analytic);

    const double t1 = 2.0 * kPi * rng.unit();
    const double t2 = 2.0 * kPi * rng.unit();
    if (t.var_target(t1) < 1e-9 || t.var_target(t2) < 1e-9) continue;
    CHECK(sum_std(t, t1, t2) <= sum_uncertainty_bound(t, t1, t2) + 1e-9);
  }
}

TEST_CASE("degenerate variances are rejected") {
  const double mean[4] = {0, 0, 0, 0};
  double second[4][4] = {};
  second[1][1] = second[2][2] = second[3][3] = 1.0;  // X variance is zero
  const MomentTable t = MomentTable::from_raw(mean, second, Provenance::analytic);
  CHECK_THROWS_AS(correlation(t, 0.0, 0.0), DegenerateMomentError);
  CHECK_THROWS_AS(inferred_variance(t, 0.0, 0.0), DegenerateMomentError);
}

TEST_CASE("cached tables are reused") {
  const StateDescriptor desc = parse_descriptor("tmsv:r=0.7");
  const MomentTable& a = moment_table(desc, {});
  const MomentTable& b = moment_table(desc, {});
  CHECK(&a == &b);
  MomentOptions quad;
  quad.provenance = Provenance::quadrature;
  quad.points = 33;
  quad.half_width = 5.0;
  const MomentTable& c = moment_table(desc, quad);
  const MomentTable& d = moment_table(desc, quad);
  CHECK(&c == &d);
  CHECK(&a != &c);
}

TEST_CASE("descriptor-level helpers mirror the table-level ones") {
  const StateDescriptor desc = parse_descriptor("lg:m=0,n=1");
  const MomentTable t = MomentTable::analytic(desc);
  CHECK(correlation(desc, 0.0, kHalfPi) ==
        doctest::Approx(correlation(t, 0.0, kHalfPi)));
  CHECK(inferred_variance(desc, 0.0, kHalfPi) ==
        doctest::Approx(inferred_variance(t, 0.0, kHalfPi)));
  // Closed forms for this family: C = -n/(n+1) against P_Y.
  CHECK(correlation(desc, 0.0, kHalfPi) == doctest::Approx(-0.5));
  CHECK(inferred_variance(desc, 0.0, kHalfPi) == doctest::Approx(0.75));
}
