#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "steerlab/phase_space.hpp"

namespace steerlab {

/// Integrand produced a non-finite value; the message names the point.
class IntegrationError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A Wigner marginal carried more negative mass than roundoff can explain.
class MarginalNegativityError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A density's total mass fell outside [1 - 1e-3, 1 + 1e-3].
class NormalizationError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Uniform tensor grid on [-half_width, half_width] per axis.
/// points must be odd and >= 33 so the origin is a node.
struct IntegrationBox {
  double half_width;
  int points;

  IntegrationBox(double half_width_, int points_);

  double step() const { return 2.0 * half_width / (points - 1); }
  double node(int i) const { return -half_width + step() * i; }
};

/// Composite Simpson weights 1,4,2,...,2,4,1 (length points, points odd).
std::vector<double> simpson_weights(int points);

/// Reassociation-stable sum: fixed-order pairwise combination.
double pairwise_sum(const double* v, std::size_t n);
inline double pairwise_sum(const std::vector<double>& v) {
  return pairwise_sum(v.data(), v.size());
}

/// Threads used by the slice runner. STEERLAB_THREADS pins the exact count
/// (1..256, oversubscription allowed); otherwise hardware concurrency.
int worker_count();

namespace detail {

// Runs fn(0..n-1) on up to worker_count() threads. Slices are pure functions
// of their index writing disjoint state, so scheduling order cannot change
// results; the first failing slice index wins error reporting.
void run_slices(int n, const std::function<void(int)>& fn);

struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  // Uniform in [0, 1), 53-bit resolution, platform independent.
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

[[noreturn]] void throw_non_finite(const PhaseSpacePoint& p);

}  // namespace detail

/// Simpson cubature of n_out integrands over the 4D box in a single sweep.
/// F must satisfy f(const PhaseSpacePoint&, double* out) writing n_out values.
/// Deterministic for fixed inputs regardless of worker count: per-slice
/// partials are combined pairwise in slice order.
template <class F>
std::vector<double> integrate4_many(F&& f, int n_out, const IntegrationBox& box) {
  const int n = box.points;
  const std::vector<double> w = simpson_weights(n);
  std::vector<double> partials(static_cast<std::size_t>(n) * n_out);
  std::vector<char> bad(n, 0);
  std::vector<PhaseSpacePoint> bad_point(n);

  detail::run_slices(n, [&](int i) {
    std::vector<double> acc(n_out, 0.0);
    std::vector<double> val(n_out);
    PhaseSpacePoint p;
    p.x = box.node(i);
    for (int j = 0; j < n && !bad[i]; ++j) {
      p.px = box.node(j);
      for (int k = 0; k < n && !bad[i]; ++k) {
        p.y = box.node(k);
        const double wjk = w[j] * w[k];
        for (int l = 0; l < n; ++l) {
          p.py = box.node(l);
          f(p, val.data());
          const double wjkl = wjk * w[l];
          bool ok = true;
          for (int m = 0; m < n_out; ++m) {
            acc[m] += wjkl * val[m];
            ok = ok && std::isfinite(val[m]);
          }
          if (!ok) {
            bad[i] = 1;
            bad_point[i] = p;
            break;
          }
        }
      }
    }
    for (int m = 0; m < n_out; ++m)
      partials[static_cast<std::size_t>(i) * n_out + m] = w[i] * acc[m];
  });

  for (int i = 0; i < n; ++i)
    if (bad[i]) detail::throw_non_finite(bad_point[i]);

  const double h3 = box.step() / 3.0;
  const double scale = h3 * h3 * h3 * h3;
  std::vector<double> column(n);
  std::vector<double> result(n_out);
  for (int m = 0; m < n_out; ++m) {
    for (int i = 0; i < n; ++i)
      column[i] = partials[static_cast<std::size_t>(i) * n_out + m];
    result[m] = scale * pairwise_sum(column);
  }
  return result;
}

/// Single-integrand convenience wrapper over integrate4_many.
template <class F>
double integrate4(F&& f, const IntegrationBox& box) {
  auto g = [&f](const PhaseSpacePoint& p, double* out) { out[0] = f(p); };
  return integrate4_many(g, 1, box)[0];
}

/// Kept coordinate pairs for 2D marginals. Axis 0 is the inference target,
/// axis 1 the estimator the other party measures.
enum class AxisPair { xy, pxpy, xpy, ypx };

const char* axis_pair_name(AxisPair axes);

/// Sampled 2D density on the box grid, row-major values[i * points + j] with
/// i on axis 0. Values are clamped nonnegative and renormalized to unit mass;
/// clamped_mass and raw_mass record what the clamp and rescale removed.
struct DensityGrid {
  AxisPair axes;
  double half_width;
  int points;
  std::vector<double> values;
  double clamped_mass = 0.0;
  double raw_mass = 1.0;

  double step() const { return 2.0 * half_width / (points - 1); }
  double node(int i) const { return -half_width + step() * i; }
  double cell() const { return step() * step(); }
};

namespace detail {

inline PhaseSpacePoint assemble_point(AxisPair axes, double a, double b, double u,
                                      double v) {
  // (a, b) are the kept coordinates, (u, v) the integrated ones.
  PhaseSpacePoint p;
  switch (axes) {
    case AxisPair::xy: p.x = a; p.y = b; p.px = u; p.py = v; break;
    case AxisPair::pxpy: p.px = a; p.py = b; p.x = u; p.y = v; break;
    case AxisPair::xpy: p.x = a; p.py = b; p.px = u; p.y = v; break;
    case AxisPair::ypx: p.y = a; p.px = b; p.x = u; p.py = v; break;
  }
  return p;
}

void finalize_density(DensityGrid& grid);

}  // namespace detail

/// Integrates the non-kept coordinate pair out of a two-mode Wigner function
/// with Simpson weights, then clamps, checks and renormalizes the marginal.
/// Throws MarginalNegativityError when clamped mass exceeds 1e-6 of the total
/// and NormalizationError when the raw mass is outside [1 - 1e-3, 1 + 1e-3].
template <class W>
DensityGrid marginalize(W&& wigner, AxisPair axes, const IntegrationBox& box) {
  const int n = box.points;
  const std::vector<double> w = simpson_weights(n);
  DensityGrid grid{axes, box.half_width, box.points,
                   std::vector<double>(static_cast<std::size_t>(n) * n)};
  std::vector<char> bad(n, 0);
  std::vector<PhaseSpacePoint> bad_point(n);
  const double h3 = box.step() / 3.0;
  const double scale = h3 * h3;

  detail::run_slices(n, [&](int i) {
    const double a = box.node(i);
    for (int j = 0; j < n && !bad[i]; ++j) {
      const double b = box.node(j);
      double acc = 0.0;
      for (int k = 0; k < n && !bad[i]; ++k) {
        const double wu = w[k];
        const double u = box.node(k);
        for (int l = 0; l < n; ++l) {
          const PhaseSpacePoint p = detail::assemble_point(axes, a, b, u, box.node(l));
          const double value = wigner(p);
          if (!std::isfinite(value)) {
            bad[i] = 1;
            bad_point[i] = p;
            break;
          }
          acc += wu * w[l] * value;
        }
      }
      grid.values[static_cast<std::size_t>(i) * n + j] = scale * acc;
    }
  });

  for (int i = 0; i < n; ++i)
    if (bad[i]) detail::throw_non_finite(bad_point[i]);

  detail::finalize_density(grid);
  return grid;
}

/// Monte Carlo cross-check estimate of a 4D integral.
struct McEstimate {
  double value;
  double std_error;
  std::uint64_t samples;
  std::uint64_t seed;
};

/// Uniform sampling over the box; reproducible for a fixed seed.
/// Throws std::invalid_argument for samples < 10000.
template <class F>
McEstimate mc_integrate4(F&& f, const IntegrationBox& box, std::uint64_t samples,
                         std::uint64_t seed) {
  if (samples < 10000)
    throw std::invalid_argument("mc_integrate4: need at least 10000 samples");
  detail::SplitMix64 rng(seed);
  const double span = 2.0 * box.half_width;
  const double volume = span * span * span * span;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    PhaseSpacePoint p;
    p.x = -box.half_width + span * rng.unit();
    p.px = -box.half_width + span * rng.unit();
    p.y = -box.half_width + span * rng.unit();
    p.py = -box.half_width + span * rng.unit();
    const double value = f(p);
    if (!std::isfinite(value)) detail::throw_non_finite(p);
    sum += value;
    sum_sq += value * value;
  }
  const double n = static_cast<double>(samples);
  const double mean = sum / n;
  const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
  return {volume * mean, volume * std::sqrt(var / n), samples, seed};
}

}  // namespace steerlab
