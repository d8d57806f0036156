#pragma once

#include <optional>
#include <vector>

#include "steerlab/phase_space.hpp"
#include "steerlab/quadrature.hpp"

namespace steerlab {

/// Differential entropies are in nats throughout.

/// -sum p ln p * cell over the grid (0 ln 0 = 0). Throws NormalizationError
/// when the grid mass is outside [1 - 1e-3, 1 + 1e-3].
double differential_entropy(const DensityGrid& grid);

/// Same for a sampled 1D density with uniform step.
double differential_entropy_1d(const std::vector<double>& density, double step);

/// Integrates the target (axis 0) out of the grid, leaving the estimator
/// density on the grid nodes.
std::vector<double> estimator_marginal(const DensityGrid& grid);

/// Entropy of a d-dimensional Gaussian: 0.5 * ln((2 pi e)^d det_sigma).
double gaussian_entropy(double det_sigma, int dim);

/// h(target | estimator) for a jointly Gaussian pair with the given centered
/// moments: 0.5 * ln(2 pi e (var_t - cov^2 / var_e)).
double gaussian_conditional_entropy(double var_target, double var_estimator,
                                    double cov);

/// Conditional entropy of one kept-axis pair, h(joint) - h(estimator).
struct EntropyReport {
  double joint;
  double estimator;
  double conditional;
  double clamped_mass;
  int grid_points;
  double box_halfwidth;
};

struct EntropyOptions {
  std::optional<double> half_width;  // default: recommended_halfwidth(desc)
  std::optional<int> points;         // default: 121
};

/// Builds the pair's marginal density by quadrature and reports
/// h(axis0 | axis1) = h(axis0, axis1) - h(axis1).
EntropyReport conditional_entropy(const StateDescriptor& desc, AxisPair axes,
                                  const EntropyOptions& opts = {});

}  // namespace steerlab
