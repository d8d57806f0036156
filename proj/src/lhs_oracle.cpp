#include "steerlab/lhs_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "steerlab/quadrature.hpp"

namespace steerlab {

namespace {

constexpr int kMaxSupport = 32;
constexpr int kMaxAlphabet = 8;
constexpr double kProbTol = 1e-9;
constexpr std::uint64_t kBatch = 512;
constexpr std::uint64_t kAngleTag = 0xda3e39cb94b95bdbull;

// Per-index substream seed; the scramble decorrelates neighbouring indices.
std::uint64_t substream(std::uint64_t seed, std::uint64_t index, std::uint64_t tag) {
  detail::SplitMix64 g(seed + 0x9e3779b97f4a7c15ull * index + tag);
  return g.next();
}

// Mean/variance of the two measured observables plus the variance of their
// sum, all conditioned on one hidden state.
struct HiddenStats {
  double mu1;
  double v1;
  double mu2;
  double v2;
  double vsum;
};

HiddenStats stats_for(const GaussianMode& m, double theta1, double theta2) {
  const double c1 = std::cos(theta1), s1 = std::sin(theta1);
  const double c2 = std::cos(theta2), s2 = std::sin(theta2);
  HiddenStats st;
  st.mu1 = m.mean_x * c1 + m.mean_p * s1;
  st.v1 = m.var_x * c1 * c1 + m.var_p * s1 * s1;
  st.mu2 = m.mean_x * c2 + m.mean_p * s2;
  st.v2 = m.var_x * c2 * c2 + m.var_p * s2 * s2;
  const double cov = m.var_x * c1 * c2 + m.var_p * s1 * s2;
  st.vsum = st.v1 + st.v2 + 2.0 * cov;
  return st;
}

HiddenStats stats_for(const QubitBloch& b, double, double) {
  // Observables are the spin components S_x and S_z; S_x^2 = S_z^2 = 1/4 and
  // the anticommutator {S_x, S_z} vanishes, so Var(S_x + S_z) closes in the
  // Bloch components alone.
  HiddenStats st;
  st.mu1 = 0.5 * b.bx;
  st.v1 = 0.25 * (1.0 - b.bx * b.bx);
  st.mu2 = 0.5 * b.bz;
  st.v2 = 0.25 * (1.0 - b.bz * b.bz);
  const double m = 0.5 * (b.bx + b.bz);
  st.vsum = 0.5 - m * m;
  return st;
}

std::vector<HiddenStats> hidden_stats(const LhsModel& model, double theta1,
                                      double theta2) {
  std::vector<HiddenStats> out;
  std::visit(
      [&](const auto& states) {
        out.reserve(states.size());
        for (const auto& s : states) out.push_back(stats_for(s, theta1, theta2));
      },
      model.states);
  return out;
}

double inferred_variance_of(const LhsModel& model,
                            const std::vector<HiddenStats>& stats, bool second) {
  const std::size_t outcomes = model.response.front().size();
  const std::size_t support = model.weights.size();
  double total = 0.0;
  for (std::size_t y = 0; y < outcomes; ++y) {
    double py = 0.0;
    for (std::size_t l = 0; l < support; ++l)
      py += model.weights[l] * model.response[l][y];
    if (py < 1e-300) continue;
    double mean = 0.0;
    for (std::size_t l = 0; l < support; ++l) {
      const double mu = second ? stats[l].mu2 : stats[l].mu1;
      mean += model.weights[l] * model.response[l][y] * mu;
    }
    mean /= py;
    double var = 0.0;
    for (std::size_t l = 0; l < support; ++l) {
      const double mu = second ? stats[l].mu2 : stats[l].mu1;
      const double v = second ? stats[l].v2 : stats[l].v1;
      const double d = mu - mean;
      var += model.weights[l] * model.response[l][y] * (v + d * d);
    }
    total += var;  // weights already carry P(lambda), so this is P(y) Var(.|y)
  }
  return total;
}

struct Tally {
  std::uint64_t violations = 0;
  double min_slack = std::numeric_limits<double>::infinity();
  double min_convexity = std::numeric_limits<double>::infinity();
  double min_triangle = std::numeric_limits<double>::infinity();

  void merge(const Tally& o) {
    violations += o.violations;
    min_slack = std::min(min_slack, o.min_slack);
    min_convexity = std::min(min_convexity, o.min_convexity);
    min_triangle = std::min(min_triangle, o.min_triangle);
  }
};

void check_one(LhsDomain domain, std::uint64_t seed, std::uint64_t index,
               Tally& tally) {
  const LhsModel model = sample_model(domain, seed, index);

  double theta1 = 0.0;
  double theta2 = std::numbers::pi / 2.0;
  if (domain == LhsDomain::gaussian) {
    detail::SplitMix64 g(substream(seed, index, kAngleTag));
    if (g.unit() >= 0.5) {
      theta1 = 2.0 * std::numbers::pi * g.unit();
      theta2 = 2.0 * std::numbers::pi * g.unit();
    }
  }

  const std::vector<HiddenStats> stats = hidden_stats(model, theta1, theta2);
  const InferredPair inf = lhs_inferred_variances(model, theta1, theta2);
  const double bound = lhs_sum_bound(model, theta1, theta2);
  const double slack = std::sqrt(inf.var1) + std::sqrt(inf.var2) - bound;
  if (slack < -kProbTol) ++tally.violations;
  tally.min_slack = std::min(tally.min_slack, slack);

  double avg1 = 0.0, avg2 = 0.0, avg_sq = 0.0;
  for (std::size_t l = 0; l < stats.size(); ++l) {
    const double w = model.weights[l];
    avg1 += w * stats[l].v1;
    avg2 += w * stats[l].v2;
    const double s = std::sqrt(stats[l].v1) + std::sqrt(stats[l].v2);
    avg_sq += w * s * s;
    // Deviations add at worst in quadrature plus the covariance term, so the
    // per-state sum variance never exceeds the squared sum of deviations.
    tally.min_triangle = std::min(tally.min_triangle, s * s - stats[l].vsum);
  }
  tally.min_convexity = std::min(tally.min_convexity, inf.var1 - avg1);
  tally.min_convexity = std::min(tally.min_convexity, inf.var2 - avg2);
  // Minkowski step: the L2(P) norms of the per-state deviations obey the
  // triangle inequality.
  const double minkowski =
      std::sqrt(avg1) + std::sqrt(avg2) - std::sqrt(avg_sq);
  tally.min_triangle = std::min(tally.min_triangle, minkowski);
}

}  // namespace

void validate_model(const LhsModel& model) {
  const std::size_t support = model.weights.size();
  if (support == 0 || support > kMaxSupport)
    throw std::invalid_argument("lhs model: hidden-state support must be 1..32");
  double wsum = 0.0;
  for (double w : model.weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("lhs model: negative weight");
    wsum += w;
  }
  if (std::abs(wsum - 1.0) > kProbTol)
    throw std::invalid_argument("lhs model: weights do not sum to 1");

  if (model.response.size() != support)
    throw std::invalid_argument("lhs model: response rows must match support");
  const std::size_t outcomes = model.response.front().size();
  if (outcomes == 0 || outcomes > kMaxAlphabet)
    throw std::invalid_argument("lhs model: outcome alphabet must be 1..8");
  for (const auto& row : model.response) {
    if (row.size() != outcomes)
      throw std::invalid_argument("lhs model: ragged response rows");
    double rsum = 0.0;
    for (double p : row) {
      if (!(p >= 0.0))
        throw std::invalid_argument("lhs model: negative response probability");
      rsum += p;
    }
    if (std::abs(rsum - 1.0) > kProbTol)
      throw std::invalid_argument("lhs model: response row does not sum to 1");
  }

  std::visit(
      [&](const auto& states) {
        if (states.size() != support)
          throw std::invalid_argument("lhs model: state count must match support");
        using T = std::decay_t<decltype(states.front())>;
        for (const auto& s : states) {
          if constexpr (std::is_same_v<T, GaussianMode>) {
            if (!(s.var_x >= 0.5 - 1e-12) || !(s.var_p >= 0.5 - 1e-12))
              throw std::invalid_argument(
                  "lhs model: quadrature variance below the vacuum floor 1/2");
            if (!std::isfinite(s.mean_x) || !std::isfinite(s.mean_p))
              throw std::invalid_argument("lhs model: non-finite mean");
          } else {
            const double r2 = s.bx * s.bx + s.by * s.by + s.bz * s.bz;
            if (!(r2 <= 1.0 + 1e-12))
              throw std::invalid_argument(
                  "lhs model: Bloch vector outside the unit ball");
          }
        }
      },
      model.states);
}

InferredPair lhs_inferred_variances(const LhsModel& model, double theta1,
                                    double theta2) {
  validate_model(model);
  const std::vector<HiddenStats> stats = hidden_stats(model, theta1, theta2);
  return {inferred_variance_of(model, stats, false),
          inferred_variance_of(model, stats, true)};
}

double lhs_sum_bound(const LhsModel& model, double theta1, double theta2) {
  validate_model(model);
  const std::vector<HiddenStats> stats = hidden_stats(model, theta1, theta2);
  double acc = 0.0;
  for (std::size_t l = 0; l < stats.size(); ++l)
    acc += model.weights[l] * stats[l].vsum;
  return std::sqrt(std::max(0.0, acc));
}

const char* lhs_domain_name(LhsDomain d) {
  return d == LhsDomain::gaussian ? "gaussian" : "qubit";
}

CertificationReport certify_no_violation(LhsDomain domain, std::uint64_t samples,
                                         std::uint64_t seed) {
  if (samples == 0)
    throw std::invalid_argument("certify_no_violation: need at least one sample");
  const std::uint64_t batches = (samples + kBatch - 1) / kBatch;
  if (batches > static_cast<std::uint64_t>(std::numeric_limits<int>::max()))
    throw std::invalid_argument("certify_no_violation: sample count too large");

  std::vector<Tally> per_batch(batches);
  detail::run_slices(static_cast<int>(batches), [&](int b) {
    const std::uint64_t lo = static_cast<std::uint64_t>(b) * kBatch;
    const std::uint64_t hi = std::min(samples, lo + kBatch);
    Tally local;
    for (std::uint64_t index = lo; index < hi; ++index)
      check_one(domain, seed, index, local);
    per_batch[b] = local;
  });

  Tally total;
  for (const Tally& t : per_batch) total.merge(t);
  return {lhs_domain_name(domain), samples,          total.violations,
          total.min_slack,         seed,             total.min_convexity,
          total.min_triangle};
}

LhsModel sample_model(LhsDomain domain, std::uint64_t seed, std::uint64_t index) {
  detail::SplitMix64 g(substream(seed, index, 0));
  LhsModel model;

  const int support = 1 + static_cast<int>(g.next() % kMaxSupport);
  const int outcomes = 1 + static_cast<int>(g.next() % kMaxAlphabet);

  model.weights.resize(support);
  double wsum = 0.0;
  for (double& w : model.weights) {
    w = -std::log1p(-g.unit());
    wsum += w;
  }
  for (double& w : model.weights) w /= wsum;

  model.response.assign(support, std::vector<double>(outcomes, 0.0));
  for (auto& row : model.response) {
    if (g.unit() < 0.25) {
      // Deterministic responses stress the estimator's exact-conditioning path.
      row[g.next() % outcomes] = 1.0;
      continue;
    }
    double rsum = 0.0;
    for (double& p : row) {
      p = -std::log1p(-g.unit());
      rsum += p;
    }
    for (double& p : row) p /= rsum;
  }

  if (domain == LhsDomain::gaussian) {
    std::vector<GaussianMode> states(support);
    for (auto& s : states) {
      s.mean_x = -3.0 + 6.0 * g.unit();
      s.mean_p = -3.0 + 6.0 * g.unit();
      // Leave a sizable mass exactly on the vacuum floor; equality cases are
      // where a bound would first crack.
      s.var_x = g.unit() < 0.3 ? 0.5 : 0.5 + 3.0 * g.unit() * g.unit();
      s.var_p = g.unit() < 0.3 ? 0.5 : 0.5 + 3.0 * g.unit() * g.unit();
    }
    model.states = std::move(states);
  } else {
    std::vector<QubitBloch> states(support);
    for (auto& s : states) {
      const double z = 2.0 * g.unit() - 1.0;
      const double phi = 2.0 * std::numbers::pi * g.unit();
      const double radius = g.unit() < 0.2 ? 1.0 : std::cbrt(g.unit());
      const double sz = std::sqrt(std::max(0.0, 1.0 - z * z));
      s.bx = radius * sz * std::cos(phi);
      s.by = radius * sz * std::sin(phi);
      s.bz = radius * z;
    }
    model.states = std::move(states);
  }

  return model;
}

}  // namespace steerlab
