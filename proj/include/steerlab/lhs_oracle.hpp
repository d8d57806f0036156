#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace steerlab {

/// Single-mode Gaussian hidden state with diagonal covariance; each
/// quadrature variance must respect the vacuum floor 1/2.
struct GaussianMode {
  double mean_x;
  double mean_p;
  double var_x;
  double var_p;
};

/// Single-qubit hidden state as a Bloch vector, |b| <= 1.
struct QubitBloch {
  double bx;
  double by;
  double bz;
};

/// Local-hidden-state model: lambda weights (support <= 32), Alice's
/// response distribution over a finite alphabet (<= 8 outcomes) and a
/// per-lambda quantum state for Bob.
struct LhsModel {
  std::vector<double> weights;                      // P(lambda)
  std::vector<std::vector<double>> response;        // P(y | lambda)
  std::variant<std::vector<GaussianMode>, std::vector<QubitBloch>> states;
};

/// Throws std::invalid_argument on shape, normalization or physicality
/// violations (tolerance 1e-9 on distributions).
void validate_model(const LhsModel& model);

/// Inferred variances of the two target observables with the optimal
/// (conditional-mean) estimator, computed exactly from the mixture.
/// Gaussian models measure the rotated quadratures X_theta1, X_theta2;
/// qubit models measure S_x, S_z and ignore the angles.
struct InferredPair {
  double var1;
  double var2;
};

InferredPair lhs_inferred_variances(const LhsModel& model, double theta1,
                                    double theta2);

/// The quantity every LHS model must dominate:
/// sqrt(sum_lambda P(lambda) Var_Q(X_theta1 + X_theta2 | lambda)).
double lhs_sum_bound(const LhsModel& model, double theta1, double theta2);

enum class LhsDomain { gaussian, qubit };

const char* lhs_domain_name(LhsDomain d);

/// Randomized certification run over sampled models. Checks
///   sqrt(var1) + sqrt(var2) >= lhs_sum_bound
/// per model plus the derivation's micro-invariants (per-outcome convexity,
/// per-lambda quantum triangle, Minkowski triangle), all tracked as minimum
/// slacks. Deterministic for a fixed seed regardless of worker count:
/// batches draw from seeds derived via splitmix64 and tallies combine in
/// batch order.
struct CertificationReport {
  std::string domain;
  std::uint64_t samples;
  std::uint64_t violations;
  double min_slack;
  std::uint64_t seed;
  double min_convexity_slack;
  double min_triangle_slack;
};

CertificationReport certify_no_violation(LhsDomain domain, std::uint64_t samples,
                                         std::uint64_t seed);

/// One random model from the domain's sampling distribution (exposed for
/// property tests). Draw index selects the model within the seeded stream.
LhsModel sample_model(LhsDomain domain, std::uint64_t seed, std::uint64_t index);

}  // namespace steerlab
