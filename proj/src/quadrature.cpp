#include "steerlab/quadrature.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <thread>

namespace steerlab {

IntegrationBox::IntegrationBox(double half_width_, int points_)
    : half_width(half_width_), points(points_) {
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw std::invalid_argument("IntegrationBox: half_width must be positive");
  if (points < 33 || points % 2 == 0)
    throw std::invalid_argument(
        "IntegrationBox: points must be odd and >= 33 so the origin is a node");
}

std::vector<double> simpson_weights(int points) {
  if (points < 3 || points % 2 == 0)
    throw std::invalid_argument("simpson_weights: points must be odd and >= 3");
  std::vector<double> w(points, 2.0);
  for (int i = 1; i < points; i += 2) w[i] = 4.0;
  w.front() = 1.0;
  w.back() = 1.0;
  return w;
}

double pairwise_sum(const double* v, std::size_t n) {
  if (n == 0) return 0.0;
  if (n <= 16) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

int worker_count() {
  // STEERLAB_THREADS pins the worker count when set (oversubscription is
  // allowed so the reduction contract is testable on any machine).
  if (const char* env = std::getenv("STEERLAB_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n >= 1 && n <= 256)
      return static_cast<int>(n);
  }
  const int n = static_cast<int>(std::thread::hardware_concurrency());
  return n < 1 ? 1 : n;
}

const char* axis_pair_name(AxisPair axes) {
  switch (axes) {
    case AxisPair::xy: return "XY";
    case AxisPair::pxpy: return "PXPY";
    case AxisPair::xpy: return "XPY";
    case AxisPair::ypx: return "YPX";
  }
  return "?";
}

namespace detail {

void run_slices(int n, const std::function<void(int)>& fn) {
  const int workers = std::min(worker_count(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1, std::memory_order_relaxed);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (int i = 0; i < n; ++i)
    if (errors[i]) std::rethrow_exception(errors[i]);
}

void throw_non_finite(const PhaseSpacePoint& p) {
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "integrand is not finite at (x=%.17g, px=%.17g, y=%.17g, py=%.17g)",
                p.x, p.px, p.y, p.py);
  throw IntegrationError(buf);
}

void finalize_density(DensityGrid& grid) {
  double negative = 0.0;
  double positive = 0.0;
  for (double& v : grid.values) {
    if (v < 0.0) {
      negative -= v;
      v = 0.0;
    } else {
      positive += v;
    }
  }
  const double cell = grid.cell();
  grid.clamped_mass = negative * cell;
  const double kept = positive * cell;
  const double total = kept + grid.clamped_mass;
  if (!(total > 0.0))
    throw NormalizationError("marginal density has no positive mass");
  if (grid.clamped_mass > 1e-6 * total) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "marginal %s carries negative mass %.3g of total %.3g",
                  axis_pair_name(grid.axes), grid.clamped_mass, total);
    throw MarginalNegativityError(buf);
  }
  if (std::abs(kept - 1.0) > 1e-3) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "marginal %s mass %.6g outside [0.999, 1.001]; "
                  "box or grid resolution is inadequate",
                  axis_pair_name(grid.axes), kept);
    throw NormalizationError(buf);
  }
  grid.raw_mass = kept;
  const double inv = 1.0 / kept;
  for (double& v : grid.values) v *= inv;
}

}  // namespace detail

}  // namespace steerlab
