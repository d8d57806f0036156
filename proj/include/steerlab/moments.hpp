#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "steerlab/phase_space.hpp"
#include "steerlab/quadrature.hpp"

namespace steerlab {

/// A rotated-quadrature variance degenerated to <= 0, so correlations and
/// inferred variances are undefined.
class DegenerateMomentError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// How a moment table was produced.
enum class Provenance { analytic, quadrature };

const char* provenance_name(Provenance p);

/// Measurement angles for the two inference settings: the target quadratures
/// X_theta1, X_theta2 on mode 1 and the estimator quadratures Y_phi1, Y_phi2
/// on mode 2. Angles are normalized into [0, 2*pi).
struct QuadratureSettings {
  double theta1;
  double theta2;
  double phi1;
  double phi2;

  QuadratureSettings(double t1, double t2, double p1, double p2);
};

/// Default pairing: infer X from Y and P_X from P_Y.
inline QuadratureSettings canonical_settings() {
  return {0.0, std::numbers::pi / 2.0, 0.0, std::numbers::pi / 2.0};
}

/// Rotated quadrature value at a phase-space point: mode 1 gives
/// x cos(theta) + px sin(theta), mode 2 gives y cos(phi) + py sin(phi).
double rotated_quadrature(const PhaseSpacePoint& p, int mode, double angle);

/// First and second moments of the four base quadratures (x, px, y, py),
/// closed under rotation: every rotated-quadrature moment is a quadratic
/// form in the stored 4x4 matrix. Means are kept so downstream quantities
/// are centered.
class MomentTable {
 public:
  /// Closed-form table for the supported families.
  static MomentTable analytic(const StateDescriptor& desc);

  /// Simpson-quadrature table: all 15 monomial integrals in one 4D sweep,
  /// normalized by the measured mass. A mass outside [1 - 1e-3, 1 + 1e-3]
  /// raises NormalizationError: the box clips the state and the normalized
  /// moments would be meaningless.
  static MomentTable from_quadrature(const StateDescriptor& desc,
                                     const IntegrationBox& box);

  /// Direct construction from raw moments (tests, synthetic states).
  static MomentTable from_raw(const double mean[4], const double second[4][4],
                              Provenance provenance);

  double mean(int axis) const;
  double second(int i, int j) const;
  /// Centered second moment.
  double cov(int i, int j) const;

  /// Centered variance of the mode-1 quadrature X_theta.
  double var_target(double theta) const;
  /// Centered variance of the mode-2 quadrature Y_phi.
  double var_estimator(double phi) const;
  /// Centered cross moment <X_theta Y_phi>_c.
  double cov_cross(double theta, double phi) const;
  /// Centered cross moment between two mode-1 quadratures.
  double cov_target(double theta1, double theta2) const;
  double mean_target(double theta) const;
  double mean_estimator(double phi) const;

  Provenance provenance() const { return provenance_; }
  /// Raw Wigner mass (exactly 1 for analytic tables).
  double mass() const { return mass_; }
  /// Grid diagnostics; zero for analytic tables.
  int grid_points() const { return grid_points_; }
  double box_halfwidth() const { return box_halfwidth_; }

 private:
  MomentTable() = default;
  double mean_[4] = {0, 0, 0, 0};
  double second_[4][4] = {};
  Provenance provenance_ = Provenance::analytic;
  double mass_ = 1.0;
  int grid_points_ = 0;
  double box_halfwidth_ = 0.0;
};

/// Resolution controls for quadrature-backed moments.
struct MomentOptions {
  Provenance provenance = Provenance::analytic;
  std::optional<double> half_width;  // default: recommended_halfwidth(desc)
  std::optional<int> points;         // default: 81
};

/// Cached table lookup keyed by (descriptor, provenance, box). The reference
/// stays valid for the life of the process.
const MomentTable& moment_table(const StateDescriptor& desc,
                                const MomentOptions& opts = {});

/// Normalized correlation of X_theta with Y_phi, clamped into [-1, 1].
/// Throws DegenerateMomentError when either variance is not positive.
double correlation(const MomentTable& table, double theta, double phi);

/// Inferred variance of X_theta from the optimal linear estimate based on
/// Y_phi: Var(X_theta) * (1 - C^2).
double inferred_variance(const MomentTable& table, double theta, double phi);

/// Uncertainty bound used by the sum criterion: Delta X_theta1 + Delta X_theta2
/// (centered standard deviations).
double sum_uncertainty_bound(const MomentTable& table, double theta1, double theta2);

/// Centered standard deviation of X_theta1 + X_theta2. Always bounded by
/// sum_uncertainty_bound up to roundoff.
double sum_std(const MomentTable& table, double theta1, double theta2);

// Descriptor-level conveniences over the cached table.
double correlation(const StateDescriptor& desc, double theta, double phi,
                   const MomentOptions& opts = {});
double inferred_variance(const StateDescriptor& desc, double theta, double phi,
                         const MomentOptions& opts = {});
double sum_uncertainty_bound(const StateDescriptor& desc, double theta1,
                             double theta2, const MomentOptions& opts = {});
double sum_std(const StateDescriptor& desc, double theta1, double theta2,
               const MomentOptions& opts = {});

}  // namespace steerlab
