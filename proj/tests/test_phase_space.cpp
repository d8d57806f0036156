#include "doctest.h"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <variant>

#include "steerlab/phase_space.hpp"

using namespace steerlab;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("descriptor parsing round trips") {
  const StateDescriptor tmsv = parse_descriptor("tmsv:r=0.5");
  CHECK(std::holds_alternative<Tmsv>(tmsv));
  CHECK(std::get<Tmsv>(tmsv).r == doctest::Approx(0.5));
  CHECK(descriptor_label(tmsv) == "tmsv:r=0.5");
  CHECK(descriptor_param(tmsv) == doctest::Approx(0.5));

  const StateDescriptor psub = parse_descriptor("psub:r=0.3");
  CHECK(std::holds_alternative<PhotonSubtracted>(psub));
  CHECK(descriptor_param(psub) == doctest::Approx(0.3));

  const StateDescriptor lg = parse_descriptor("lg:m=1,n=2");
  CHECK(std::holds_alternative<LaguerreGauss>(lg));
  CHECK(std::get<LaguerreGauss>(lg).m == 1);
  CHECK(std::get<LaguerreGauss>(lg).n == 2);
  CHECK(descriptor_label(lg) == "lg:m=1,n=2");
  CHECK(descriptor_param(lg) == doctest::Approx(2.0));
}

TEST_CASE("descriptor parsing rejects malformed input") {
  CHECK_THROWS_AS(parse_descriptor("coherent:r=1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_descriptor("tmsv"), std::invalid_argument);
  CHECK_THROWS_AS(parse_descriptor("tmsv:r=abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_descriptor("tmsv:r=0.2,r=0.3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_descriptor("tmsv:s=0.2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_descriptor("lg:m=0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_descriptor("lg:m=0.5,n=1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_descriptor("tmsv:r=-0.1"), std::domain_error);
  CHECK_THROWS_AS(parse_descriptor("lg:m=-1,n=0"), std::domain_error);
}

TEST_CASE("recommended half-width grows with squeezing") {
  CHECK(recommended_halfwidth(Tmsv{0.0}) == doctest::Approx(6.0));
  CHECK(recommended_halfwidth(Tmsv{0.5}) ==
        doctest::Approx(6.0 * std::sqrt(std::cosh(1.0))));
  CHECK(recommended_halfwidth(PhotonSubtracted{0.3}) ==
        doctest::Approx(6.0 * std::sqrt(std::cosh(0.6))));
  CHECK(recommended_halfwidth(LaguerreGauss{0, 5}) == doctest::Approx(6.0));
}

TEST_CASE("squeezed-vacuum Wigner values") {
  // Vacuum peak 1/pi^2 at the origin.
  CHECK(wigner_tmsv(0.0, {0, 0, 0, 0}) ==
        doctest::Approx(1.0 / (kPi * kPi)).epsilon(1e-14));
  // Frozen spot value.
  CHECK(wigner_tmsv(0.5, {0.5, 0.0, 0.5, 0.0}) ==
        doctest::Approx(0.08429780162711568).epsilon(1e-13));
  // Parity in phase space.
  const PhaseSpacePoint p{0.7, -0.3, 0.2, 0.9};
  const PhaseSpacePoint q{-0.7, 0.3, -0.2, -0.9};
  CHECK(wigner_tmsv(0.4, p) == doctest::Approx(wigner_tmsv(0.4, q)).epsilon(1e-14));
}

TEST_CASE("photon-subtracted Wigner values") {
  // The origin pins the non-Gaussian dip at -1/pi^2 for every r.
  for (double r : {0.0, 0.2, 0.5}) {
    CHECK(wigner_photon_subtracted(r, {0, 0, 0, 0}) ==
          doctest::Approx(-1.0 / (kPi * kPi)).epsilon(1e-13));
  }
  CHECK(wigner_photon_subtracted(0.3, {0.3, -0.2, 0.1, 0.4}) ==
        doctest::Approx(-0.0595837474128945).epsilon(1e-13));
}

TEST_CASE("correlated-vortex Wigner values") {
  // Frozen spot value at (X, PX, Y, PY) = (1, 0, 0, 0) for m=0, n=2.
  CHECK(wigner_lg(0, 2, {1, 0, 0, 0}) ==
        doctest::Approx(-std::exp(-1.0) / (2.0 * kPi * kPi)).epsilon(1e-13));
  // m=n=0 reduces to the two-mode vacuum.
  const PhaseSpacePoint p{0.4, 0.1, -0.2, 0.3};
  CHECK(wigner_lg(0, 0, p) == doctest::Approx(wigner_tmsv(0.0, p)).epsilon(1e-13));
  // Exchanging the two indices mirrors the state; the origin value is even.
  CHECK(wigner_lg(2, 0, {0, 0, 0, 0}) ==
        doctest::Approx(wigner_lg(0, 2, {0, 0, 0, 0})).epsilon(1e-13));
}

TEST_CASE("wigner dispatcher agrees with the concrete functions") {
  const PhaseSpacePoint p{0.3, 0.1, -0.4, 0.2};
  CHECK(wigner(parse_descriptor("tmsv:r=0.5"), p) ==
        doctest::Approx(wigner_tmsv(0.5, p)).epsilon(1e-15));
  CHECK(wigner(parse_descriptor("psub:r=0.2"), p) ==
        doctest::Approx(wigner_photon_subtracted(0.2, p)).epsilon(1e-15));
  CHECK(wigner(parse_descriptor("lg:m=1,n=1"), p) ==
        doctest::Approx(wigner_lg(1, 1, p)).epsilon(1e-15));
}

TEST_CASE("wigner functions reject invalid parameters") {
  CHECK_THROWS_AS(wigner_tmsv(-0.1, {0, 0, 0, 0}), std::domain_error);
  CHECK_THROWS_AS(wigner_photon_subtracted(-0.2, {0, 0, 0, 0}), std::domain_error);
  CHECK_THROWS_AS(wigner_lg(-1, 0, {0, 0, 0, 0}), std::domain_error);
}

TEST_CASE("log-space guard keeps far tails finite") {
  // Far outside the box the Gaussian underflows; the product must stay 0,
  // never NaN or inf, even against a huge polynomial bracket.
  const PhaseSpacePoint far{40.0, 40.0, -40.0, -40.0};
  const double v = wigner_photon_subtracted(0.5, far);
  CHECK(std::isfinite(v));
  CHECK(std::abs(v) < 1e-200);
  const double w = wigner_lg(5, 5, far);
  CHECK(std::isfinite(w));
}
