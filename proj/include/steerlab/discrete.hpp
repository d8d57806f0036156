#pragma once

#include <Eigen/Dense>
#include <string>

#include "steerlab/criteria.hpp"

namespace steerlab {

using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;

/// Kronecker product with the first factor on Alice's side.
Mat4 kron(const Mat2& a, const Mat2& b);

Mat2 pauli_x();
Mat2 pauli_y();
Mat2 pauli_z();
/// Spin-1/2 observables S_i = sigma_i / 2.
Mat2 spin_x();
Mat2 spin_z();

/// Validated two-qubit density matrix: Hermitian within 1e-12, unit trace
/// within 1e-12, eigenvalues >= -1e-10. Basis order |00>,|01>,|10>,|11> with
/// Alice's qubit first.
class TwoQubitState {
 public:
  explicit TwoQubitState(const Mat4& rho);
  const Mat4& rho() const { return rho_; }

 private:
  Mat4 rho_;
};

/// Werner state p |psi-><psi-| + (1-p)/4 I. Throws std::domain_error for
/// p outside [0, 1].
TwoQubitState werner(double p);

/// <A (x) B>; the imaginary residue must stay below 1e-12.
double expectation(const TwoQubitState& state, const Mat2& alice, const Mat2& bob);

/// Partial trace over Alice.
Mat2 reduced_bob(const TwoQubitState& state);

/// Reid-prescription inferred deviation of Bob's observable from Alice's:
/// sqrt(<B^2> - <A B>^2 / <A^2>). Throws DegenerateMomentError when
/// <A^2> is not positive.
double spin_inferred_std(const TwoQubitState& state, const Mat2& bob,
                         const Mat2& alice);

/// Standard deviation of B1 + B2 on Bob's reduced state.
double sum_spin_std(const TwoQubitState& state, const Mat2& b1, const Mat2& b2);

/// Shannon conditional entropy H(B|A) in bits for a pair of +/-1 observables,
/// from the joint outcome distribution Tr[rho (Pi_a (x) Pi_b)].
double conditional_entropy_bits(const TwoQubitState& state, const Mat2& alice,
                                const Mat2& bob);

/// Sum criterion with S_x, S_z: bound Delta(S_x + S_z) on Bob against
/// the inferred deviations. Same verdict conventions as the CV evaluators.
SteeringVerdict sum_steering_discrete(const TwoQubitState& state);
SteeringVerdict werner_sum_verdict(double p);

/// Entropic criterion with sigma_x, sigma_z outcomes: bound 1 bit
/// (log2 of the mutually unbiased overlap bound).
SteeringVerdict entropic_steering_discrete(const TwoQubitState& state);
SteeringVerdict werner_entropic_verdict(double p);

/// CHSH-analogue steering functional
/// sqrt(<(A1+A2)B1>^2 + <(A1+A2)B2>^2) + sqrt(<(A1-A2)B1>^2 + <(A1-A2)B2>^2),
/// bound 2. A's must be dichotomic (M^2 = I); B's dichotomic and mutually
/// unbiased (Tr[B1 B2] = 0). Throws std::invalid_argument otherwise.
double chsh_steering(const TwoQubitState& state, const Mat2& a1, const Mat2& a2,
                     const Mat2& b1, const Mat2& b2);

struct ChshResult {
  double value;
  double alpha;   // A1 angle in the X-Z plane
  double beta;    // A2 angle
  double gamma;   // B-pair rotation
  bool steerable; // value > 2
};

/// Maximizes the functional over X-Z plane settings: A_i = cos(t) sx + sin(t) sz,
/// B1 = cos(g) sx + sin(g) sz, B2 = -sin(g) sx + cos(g) sz.
ChshResult chsh_optimized(const TwoQubitState& state);

}  // namespace steerlab
