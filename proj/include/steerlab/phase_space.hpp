#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <variant>

#include "steerlab/special_functions.hpp"

namespace steerlab {

/// Two-mode phase-space point. Mode 1 carries (x, px), mode 2 carries (y, py).
/// Quadrature convention: hbar = 1, X = (a + a^dag)/sqrt(2), vacuum variance 1/2.
struct PhaseSpacePoint {
  double x = 0.0;
  double px = 0.0;
  double y = 0.0;
  double py = 0.0;
};

/// Two-mode squeezed vacuum, squeezing parameter r >= 0.
struct Tmsv {
  double r;
};

/// Single-photon-subtracted two-mode squeezed vacuum, r >= 0.
struct PhotonSubtracted {
  double r;
};

/// Two-mode Laguerre-Gauss beam with mode indices m, n >= 0.
struct LaguerreGauss {
  int m;
  int n;
};

using StateDescriptor = std::variant<Tmsv, PhotonSubtracted, LaguerreGauss>;

/// Parses "tmsv:r=0.5", "psub:r=0.3" or "lg:m=0,n=2".
/// Throws std::invalid_argument on malformed text, std::domain_error on
/// out-of-range parameters.
StateDescriptor parse_descriptor(const std::string& text);

/// Canonical descriptor string, inverse of parse_descriptor.
std::string descriptor_label(const StateDescriptor& desc);

/// Scalar family parameter: r for the squeezed families, n for LG.
double descriptor_param(const StateDescriptor& desc);

/// Half-width enclosing all but < 1e-8 of each family's mass:
/// 6*sqrt(cosh 2r) for the squeezed families, 6 for LG.
double recommended_halfwidth(const StateDescriptor& desc);

namespace detail {

// Shared Gaussian-exponent guard: below this the factor is assembled in log
// space so a large polynomial prefactor cannot hit a spurious 0 * inf.
inline constexpr double kLogSpaceExponent = -300.0;

inline double gaussian_times_bracket(double exponent, double bracket) {
  constexpr double pi = std::numbers::pi;
  const double inv_pi2 = 1.0 / (pi * pi);
  if (exponent > kLogSpaceExponent) return bracket * std::exp(exponent) * inv_pi2;
  if (bracket == 0.0) return 0.0;
  const double mag = std::exp(exponent + std::log(std::abs(bracket))) * inv_pi2;
  return bracket < 0.0 ? -mag : mag;
}

}  // namespace detail

/// W(X,Y,PX,PY) = (1/pi^2) exp[-2(PX PY - X Y) sinh 2r - (X^2+Y^2+PX^2+PY^2) cosh 2r].
struct TmsvWigner {
  double s2r, c2r;
  explicit TmsvWigner(double r) : s2r(std::sinh(2.0 * r)), c2r(std::cosh(2.0 * r)) {}
  double operator()(const PhaseSpacePoint& p) const {
    const double q2 = p.x * p.x + p.y * p.y + p.px * p.px + p.py * p.py;
    const double e = -2.0 * (p.px * p.py - p.x * p.y) * s2r - q2 * c2r;
    return detail::gaussian_times_bracket(e, 1.0);
  }
};

/// Same Gaussian core times the photon-subtraction bracket
/// [-sinh2r((PX-PY)^2-(X-Y)^2) + cosh2r((PX-PY)^2+(X-Y)^2) - 1].
struct PhotonSubtractedWigner {
  double s2r, c2r;
  explicit PhotonSubtractedWigner(double r)
      : s2r(std::sinh(2.0 * r)), c2r(std::cosh(2.0 * r)) {}
  double operator()(const PhaseSpacePoint& p) const {
    const double q2 = p.x * p.x + p.y * p.y + p.px * p.px + p.py * p.py;
    const double e = -2.0 * (p.px * p.py - p.x * p.y) * s2r - q2 * c2r;
    const double u = p.x - p.y;
    const double v = p.px - p.py;
    const double bracket = -s2r * (v * v - u * u) + c2r * (v * v + u * u) - 1.0;
    return detail::gaussian_times_bracket(e, bracket);
  }
};

/// W_{m,n} = ((-1)^{m+n}/pi^2) L_m[4(Q0+Q2)] L_n[4(Q0-Q2)] exp(-4 Q0) with
/// Q0 = (X^2+Y^2+PX^2+PY^2)/4 and Q2 = (X PY - Y PX)/2.
struct LgWigner {
  int m, n;
  double sign;
  LgWigner(int m_, int n_) : m(m_), n(n_), sign(((m_ + n_) % 2) ? -1.0 : 1.0) {}
  double operator()(const PhaseSpacePoint& p) const {
    const double q0 = 0.25 * (p.x * p.x + p.y * p.y + p.px * p.px + p.py * p.py);
    const double q2 = 0.5 * (p.x * p.py - p.y * p.px);
    const double bracket =
        sign * laguerre(m, 0, 4.0 * (q0 + q2)) * laguerre(n, 0, 4.0 * (q0 - q2));
    return detail::gaussian_times_bracket(-4.0 * q0, bracket);
  }
};

double wigner_tmsv(double r, const PhaseSpacePoint& p);
double wigner_photon_subtracted(double r, const PhaseSpacePoint& p);
double wigner_lg(int m, int n, const PhaseSpacePoint& p);

/// Dispatching evaluator for any descriptor.
double wigner(const StateDescriptor& desc, const PhaseSpacePoint& p);

}  // namespace steerlab
