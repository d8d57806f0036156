#include "steerlab/moments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <mutex>

namespace steerlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double normalize_angle(double a) {
  if (!std::isfinite(a)) throw std::invalid_argument("quadrature angle is not finite");
  double out = std::fmod(a, kTwoPi);
  if (out < 0.0) out += kTwoPi;
  return out;
}

// Unit vector of the rotated quadrature in the (x, px, y, py) basis.
struct AxisVector {
  double c[4] = {0, 0, 0, 0};
};

AxisVector target_axis(double theta) {
  AxisVector a;
  a.c[0] = std::cos(theta);
  a.c[1] = std::sin(theta);
  return a;
}

AxisVector estimator_axis(double phi) {
  AxisVector a;
  a.c[2] = std::cos(phi);
  a.c[3] = std::sin(phi);
  return a;
}

}  // namespace

const char* provenance_name(Provenance p) {
  return p == Provenance::analytic ? "analytic" : "quadrature";
}

QuadratureSettings::QuadratureSettings(double t1, double t2, double p1, double p2)
    : theta1(normalize_angle(t1)),
      theta2(normalize_angle(t2)),
      phi1(normalize_angle(p1)),
      phi2(normalize_angle(p2)) {}

double rotated_quadrature(const PhaseSpacePoint& p, int mode, double angle) {
  if (mode == 1) return p.x * std::cos(angle) + p.px * std::sin(angle);
  if (mode == 2) return p.y * std::cos(angle) + p.py * std::sin(angle);
  throw std::invalid_argument("rotated_quadrature: mode must be 1 or 2");
}

MomentTable MomentTable::analytic(const StateDescriptor& desc) {
  MomentTable t;
  t.provenance_ = Provenance::analytic;
  if (const auto* tm = std::get_if<Tmsv>(&desc)) {
    const double c = std::cosh(2.0 * tm->r);
    const double s = std::sinh(2.0 * tm->r);
    t.second_[0][0] = t.second_[1][1] = t.second_[2][2] = t.second_[3][3] = 0.5 * c;
    t.second_[0][2] = t.second_[2][0] = 0.5 * s;
    t.second_[1][3] = t.second_[3][1] = -0.5 * s;
  } else if (const auto* ps = std::get_if<PhotonSubtracted>(&desc)) {
    const double c = std::cosh(2.0 * ps->r);
    const double s = std::sinh(2.0 * ps->r);
    t.second_[0][0] = t.second_[2][2] = c - 0.5 * s;
    t.second_[1][1] = t.second_[3][3] = c + 0.5 * s;
    t.second_[0][2] = t.second_[2][0] = s - 0.5 * c;
    t.second_[1][3] = t.second_[3][1] = -(s + 0.5 * c);
  } else {
    const auto& lg = std::get<LaguerreGauss>(desc);
    const double diag = 0.5 * (lg.m + lg.n + 1.0);
    t.second_[0][0] = t.second_[1][1] = t.second_[2][2] = t.second_[3][3] = diag;
    t.second_[0][3] = t.second_[3][0] = 0.5 * (lg.m - lg.n);
    t.second_[1][2] = t.second_[2][1] = 0.5 * (lg.n - lg.m);
  }
  return t;
}

MomentTable MomentTable::from_quadrature(const StateDescriptor& desc,
                                         const IntegrationBox& box) {
  // One sweep accumulates the mass, the 4 means and the 10 second moments.
  auto accumulate = [](auto&& wigner, const IntegrationBox& b) {
    auto f = [&wigner](const PhaseSpacePoint& p, double* out) {
      const double w = wigner(p);
      const double q[4] = {p.x, p.px, p.y, p.py};
      out[0] = w;
      out[1] = w * q[0];
      out[2] = w * q[1];
      out[3] = w * q[2];
      out[4] = w * q[3];
      int m = 5;
      for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) out[m++] = w * q[i] * q[j];
    };
    return integrate4_many(f, 15, b);
  };
  std::vector<double> raw = std::visit(
      [&](const auto& family) {
        if constexpr (std::is_same_v<std::decay_t<decltype(family)>, Tmsv>)
          return accumulate(TmsvWigner(family.r), box);
        else if constexpr (std::is_same_v<std::decay_t<decltype(family)>,
                                          PhotonSubtracted>)
          return accumulate(PhotonSubtractedWigner(family.r), box);
        else
          return accumulate(LgWigner(family.m, family.n), box);
      },
      desc);

  MomentTable t;
  t.provenance_ = Provenance::quadrature;
  t.mass_ = raw[0];
  t.grid_points_ = box.points;
  t.box_halfwidth_ = box.half_width;
  if (!(t.mass_ > 0.0))
    throw DegenerateMomentError("moment sweep found nonpositive total mass");
  if (std::abs(t.mass_ - 1.0) > 1e-3) {
    char msg[128];
    std::snprintf(msg, sizeof msg,
                  "moment sweep mass %.6g outside [0.999, 1.001]: the box clips the state",
                  t.mass_);
    throw NormalizationError(msg);
  }
  const double inv = 1.0 / t.mass_;
  for (int i = 0; i < 4; ++i) t.mean_[i] = raw[1 + i] * inv;
  int m = 5;
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) {
      t.second_[i][j] = t.second_[j][i] = raw[m++] * inv;
    }
  return t;
}

MomentTable MomentTable::from_raw(const double mean[4], const double second[4][4],
                                  Provenance provenance) {
  MomentTable t;
  t.provenance_ = provenance;
  for (int i = 0; i < 4; ++i) {
    t.mean_[i] = mean[i];
    for (int j = 0; j < 4; ++j) t.second_[i][j] = second[i][j];
  }
  return t;
}

double MomentTable::mean(int axis) const { return mean_[axis]; }
double MomentTable::second(int i, int j) const { return second_[i][j]; }
double MomentTable::cov(int i, int j) const {
  return second_[i][j] - mean_[i] * mean_[j];
}

namespace {

double quadratic_form(const MomentTable& t, const AxisVector& a, const AxisVector& b) {
  double s = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (a.c[i] != 0.0 && b.c[j] != 0.0) s += a.c[i] * b.c[j] * t.cov(i, j);
  return s;
}

double mean_along(const MomentTable& t, const AxisVector& a) {
  double s = 0.0;
  for (int i = 0; i < 4; ++i)
    if (a.c[i] != 0.0) s += a.c[i] * t.mean(i);
  return s;
}

}  // namespace

double MomentTable::var_target(double theta) const {
  const AxisVector a = target_axis(theta);
  return quadratic_form(*this, a, a);
}

double MomentTable::var_estimator(double phi) const {
  const AxisVector a = estimator_axis(phi);
  return quadratic_form(*this, a, a);
}

double MomentTable::cov_cross(double theta, double phi) const {
  return quadratic_form(*this, target_axis(theta), estimator_axis(phi));
}

double MomentTable::cov_target(double theta1, double theta2) const {
  return quadratic_form(*this, target_axis(theta1), target_axis(theta2));
}

double MomentTable::mean_target(double theta) const {
  return mean_along(*this, target_axis(theta));
}

double MomentTable::mean_estimator(double phi) const {
  return mean_along(*this, estimator_axis(phi));
}

namespace {

IntegrationBox resolve_box(const StateDescriptor& desc, const MomentOptions& opts) {
  return IntegrationBox(opts.half_width.value_or(recommended_halfwidth(desc)),
                        opts.points.value_or(81));
}

std::string cache_key(const StateDescriptor& desc, const IntegrationBox& box) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "|%a|%d", box.half_width, box.points);
  return descriptor_label(desc) + buf;
}

}  // namespace

const MomentTable& moment_table(const StateDescriptor& desc, const MomentOptions& opts) {
  static std::mutex mutex;
  static std::map<std::string, std::unique_ptr<const MomentTable>> cache;

  if (opts.provenance == Provenance::analytic) {
    const std::string key = "analytic:" + descriptor_label(desc);
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(key);
    if (it == cache.end())
      it = cache.emplace(key, std::make_unique<MomentTable>(MomentTable::analytic(desc)))
               .first;
    return *it->second;
  }

  const IntegrationBox box = resolve_box(desc, opts);
  const std::string key = "quadrature:" + cache_key(desc, box);
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;
  }
  auto table = std::make_unique<const MomentTable>(MomentTable::from_quadrature(desc, box));
  std::lock_guard<std::mutex> lock(mutex);
  auto [it, inserted] = cache.emplace(key, std::move(table));
  return *it->second;
}

double correlation(const MomentTable& table, double theta, double phi) {
  const double vt = table.var_target(theta);
  const double ve = table.var_estimator(phi);
  if (!(vt > 0.0) || !(ve > 0.0)) {
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "degenerate variance (target %.6g, estimator %.6g) at "
                  "theta=%.6g, phi=%.6g",
                  vt, ve, theta, phi);
    throw DegenerateMomentError(buf);
  }
  const double c = table.cov_cross(theta, phi) / std::sqrt(vt * ve);
  return std::clamp(c, -1.0, 1.0);
}

double inferred_variance(const MomentTable& table, double theta, double phi) {
  const double c = correlation(table, theta, phi);
  return table.var_target(theta) * (1.0 - c * c);
}

double sum_uncertainty_bound(const MomentTable& table, double theta1, double theta2) {
  const double v1 = table.var_target(theta1);
  const double v2 = table.var_target(theta2);
  if (!(v1 >= 0.0) || !(v2 >= 0.0))
    throw DegenerateMomentError("negative target variance in sum bound");
  return std::sqrt(v1) + std::sqrt(v2);
}

double sum_std(const MomentTable& table, double theta1, double theta2) {
  const double v =
      table.var_target(theta1) + table.var_target(theta2) + 2.0 * table.cov_target(theta1, theta2);
  return std::sqrt(std::max(0.0, v));
}

double correlation(const StateDescriptor& desc, double theta, double phi,
                   const MomentOptions& opts) {
  return correlation(moment_table(desc, opts), theta, phi);
}

double inferred_variance(const StateDescriptor& desc, double theta, double phi,
                         const MomentOptions& opts) {
  return inferred_variance(moment_table(desc, opts), theta, phi);
}

double sum_uncertainty_bound(const StateDescriptor& desc, double theta1, double theta2,
                             const MomentOptions& opts) {
  return sum_uncertainty_bound(moment_table(desc, opts), theta1, theta2);
}

double sum_std(const StateDescriptor& desc, double theta1, double theta2,
               const MomentOptions& opts) {
  return sum_std(moment_table(desc, opts), theta1, theta2);
}

}  // namespace steerlab
