#include "steerlab/entropy.hpp"

#include <cmath>
#include <cstdio>

namespace steerlab {

namespace {

void check_mass(double mass, const char* what) {
  if (std::abs(mass - 1.0) > 1e-3) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%s mass %.6g outside [0.999, 1.001]", what, mass);
    throw NormalizationError(buf);
  }
}

// -sum p ln p over samples, measure attached by the caller.
double neg_p_log_p(const double* v, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    if (v[i] > 0.0) s -= v[i] * std::log(v[i]);
  return s;
}

}  // namespace

double differential_entropy(const DensityGrid& grid) {
  double mass = 0.0;
  for (double v : grid.values) mass += v;
  mass *= grid.cell();
  check_mass(mass, "density grid");
  return neg_p_log_p(grid.values.data(), grid.values.size()) * grid.cell();
}

double differential_entropy_1d(const std::vector<double>& density, double step) {
  double mass = 0.0;
  for (double v : density) mass += v;
  mass *= step;
  check_mass(mass, "1d density");
  return neg_p_log_p(density.data(), density.size()) * step;
}

std::vector<double> estimator_marginal(const DensityGrid& grid) {
  const int n = grid.points;
  std::vector<double> out(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const double* row = grid.values.data() + static_cast<std::size_t>(i) * n;
    for (int j = 0; j < n; ++j) out[j] += row[j];
  }
  const double h = grid.step();
  for (double& v : out) v *= h;
  return out;
}

double gaussian_entropy(double det_sigma, int dim) {
  if (!(det_sigma > 0.0))
    throw std::domain_error("gaussian_entropy: determinant must be positive");
  if (dim < 1) throw std::domain_error("gaussian_entropy: dimension must be >= 1");
  const double two_pi_e = 2.0 * std::numbers::pi * std::numbers::e;
  return 0.5 * std::log(std::pow(two_pi_e, dim) * det_sigma);
}

double gaussian_conditional_entropy(double var_target, double var_estimator,
                                    double cov) {
  if (!(var_estimator > 0.0))
    throw std::domain_error("gaussian_conditional_entropy: estimator variance must be positive");
  const double residual = var_target - cov * cov / var_estimator;
  return gaussian_entropy(residual, 1);
}

EntropyReport conditional_entropy(const StateDescriptor& desc, AxisPair axes,
                                  const EntropyOptions& opts) {
  const IntegrationBox box(opts.half_width.value_or(recommended_halfwidth(desc)),
                           opts.points.value_or(121));
  const DensityGrid grid = std::visit(
      [&](const auto& family) {
        using T = std::decay_t<decltype(family)>;
        if constexpr (std::is_same_v<T, Tmsv>)
          return marginalize(TmsvWigner(family.r), axes, box);
        else if constexpr (std::is_same_v<T, PhotonSubtracted>)
          return marginalize(PhotonSubtractedWigner(family.r), axes, box);
        else
          return marginalize(LgWigner(family.m, family.n), axes, box);
      },
      desc);

  EntropyReport report;
  report.joint = differential_entropy(grid);
  report.estimator = differential_entropy_1d(estimator_marginal(grid), grid.step());
  report.conditional = report.joint - report.estimator;
  report.clamped_mass = grid.clamped_mass;
  report.grid_points = grid.points;
  report.box_halfwidth = grid.half_width;
  return report;
}

}  // namespace steerlab
