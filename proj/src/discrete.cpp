#include "steerlab/discrete.hpp"

#include <cmath>
#include <numbers>

#include "steerlab/moments.hpp"

namespace steerlab {

namespace {

using Complex = std::complex<double>;

constexpr double kHermitianTol = 1e-12;
constexpr double kTraceTol = 1e-12;
constexpr double kEigenFloor = -1e-10;
constexpr double kImagTol = 1e-12;

double shannon_bits(const std::vector<double>& p) {
  double h = 0.0;
  for (double v : p)
    if (v > 0.0) h -= v * std::log2(v);
  return h;
}

void check_dichotomic(const Mat2& m, const char* name) {
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument(std::string(name) + " must be Hermitian");
  if ((m * m - Mat2::Identity()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument(std::string(name) +
                                " must be dichotomic (square to the identity)");
}

}  // namespace

Mat4 kron(const Mat2& a, const Mat2& b) {
  Mat4 out;
  out.block<2, 2>(0, 0) = a(0, 0) * b;
  out.block<2, 2>(0, 2) = a(0, 1) * b;
  out.block<2, 2>(2, 0) = a(1, 0) * b;
  out.block<2, 2>(2, 2) = a(1, 1) * b;
  return out;
}

Mat2 pauli_x() {
  Mat2 m;
  m << Complex(0, 0), Complex(1, 0), Complex(1, 0), Complex(0, 0);
  return m;
}

Mat2 pauli_y() {
  Mat2 m;
  m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  return m;
}

Mat2 pauli_z() {
  Mat2 m;
  m << Complex(1, 0), Complex(0, 0), Complex(0, 0), Complex(-1, 0);
  return m;
}

Mat2 spin_x() { return 0.5 * pauli_x(); }
Mat2 spin_z() { return 0.5 * pauli_z(); }

TwoQubitState::TwoQubitState(const Mat4& rho) : rho_(rho) {
  if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol)
    throw std::invalid_argument("two-qubit state: matrix is not Hermitian");
  if (std::abs(rho_.trace() - Complex(1.0, 0.0)) > kTraceTol)
    throw std::invalid_argument("two-qubit state: trace is not 1");
  Eigen::SelfAdjointEigenSolver<Mat4> solver(rho_, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < kEigenFloor)
    throw std::invalid_argument("two-qubit state: negative eigenvalue");
}

TwoQubitState werner(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::domain_error("werner: mixing p must lie in [0, 1]");
  Eigen::Vector4cd singlet;
  singlet << Complex(0, 0), Complex(1.0 / std::numbers::sqrt2, 0),
      Complex(-1.0 / std::numbers::sqrt2, 0), Complex(0, 0);
  const Mat4 rho =
      p * (singlet * singlet.adjoint()) + (1.0 - p) * 0.25 * Mat4::Identity();
  return TwoQubitState(rho);
}

double expectation(const TwoQubitState& state, const Mat2& alice, const Mat2& bob) {
  const Complex value = (state.rho() * kron(alice, bob)).trace();
  if (std::abs(value.imag()) > kImagTol)
    throw std::runtime_error("expectation picked up an imaginary residue");
  return value.real();
}

Mat2 reduced_bob(const TwoQubitState& state) {
  Mat2 out = Mat2::Zero();
  for (int a = 0; a < 2; ++a)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) out(i, j) += state.rho()(2 * a + i, 2 * a + j);
  return out;
}

double spin_inferred_std(const TwoQubitState& state, const Mat2& bob,
                         const Mat2& alice) {
  const double a2 = expectation(state, alice * alice, Mat2::Identity());
  const double b2 = expectation(state, Mat2::Identity(), bob * bob);
  const double ab = expectation(state, alice, bob);
  if (!(a2 > 0.0))
    throw DegenerateMomentError("inferred deviation: estimator second moment is not positive");
  const double v = b2 - ab * ab / a2;
  return std::sqrt(std::max(0.0, v));
}

double sum_spin_std(const TwoQubitState& state, const Mat2& b1, const Mat2& b2) {
  const Mat2 rho_b = reduced_bob(state);
  const Mat2 sum = b1 + b2;
  const Complex m1 = (rho_b * sum).trace();
  const Complex m2 = (rho_b * sum * sum).trace();
  if (std::abs(m1.imag()) > kImagTol || std::abs(m2.imag()) > kImagTol)
    throw std::runtime_error("sum_spin_std picked up an imaginary residue");
  const double v = m2.real() - m1.real() * m1.real();
  return std::sqrt(std::max(0.0, v));
}

double conditional_entropy_bits(const TwoQubitState& state, const Mat2& alice,
                                const Mat2& bob) {
  check_dichotomic(alice, "alice observable");
  check_dichotomic(bob, "bob observable");
  const Mat2 id = Mat2::Identity();
  const Mat2 pa[2] = {0.5 * (id + alice), 0.5 * (id - alice)};
  const Mat2 pb[2] = {0.5 * (id + bob), 0.5 * (id - bob)};
  std::vector<double> joint(4, 0.0);
  std::vector<double> marginal(2, 0.0);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      double p = expectation(state, pa[a], pb[b]);
      if (p < 0.0 && p > -1e-12) p = 0.0;
      if (p < 0.0) throw std::runtime_error("negative outcome probability");
      joint[2 * a + b] = p;
      marginal[a] += p;
    }
  }
  return shannon_bits(joint) - shannon_bits(marginal);
}

SteeringVerdict sum_steering_discrete(const TwoQubitState& state) {
  const Mat2 sx = spin_x();
  const Mat2 sz = spin_z();
  const double bound = sum_spin_std(state, sx, sz);
  const double inferred =
      spin_inferred_std(state, sx, sx) + spin_inferred_std(state, sz, sz);
  const double ratio = bound / inferred;
  return {Criterion::sum, bound, inferred, ratio, ratio > 1.0,
          Provenance::analytic, VerdictDiagnostics{}};
}

SteeringVerdict werner_sum_verdict(double p) { return sum_steering_discrete(werner(p)); }

SteeringVerdict entropic_steering_discrete(const TwoQubitState& state) {
  // Maassen-Uffink bound for the mutually unbiased sigma_x, sigma_z pair.
  const double bound_bits = 1.0;
  const double lhs = conditional_entropy_bits(state, pauli_x(), pauli_x()) +
                     conditional_entropy_bits(state, pauli_z(), pauli_z());
  const double ratio = bound_bits / lhs;
  return {Criterion::entropic, lhs, bound_bits, ratio, ratio > 1.0,
          Provenance::analytic, VerdictDiagnostics{}};
}

SteeringVerdict werner_entropic_verdict(double p) {
  return entropic_steering_discrete(werner(p));
}

double chsh_steering(const TwoQubitState& state, const Mat2& a1, const Mat2& a2,
                     const Mat2& b1, const Mat2& b2) {
  check_dichotomic(a1, "A1");
  check_dichotomic(a2, "A2");
  check_dichotomic(b1, "B1");
  check_dichotomic(b2, "B2");
  if (std::abs((b1 * b2).trace()) > 1e-10)
    throw std::invalid_argument("B1 and B2 must be mutually unbiased (Tr[B1 B2] = 0)");
  const double p11 = expectation(state, a1, b1);
  const double p12 = expectation(state, a1, b2);
  const double p21 = expectation(state, a2, b1);
  const double p22 = expectation(state, a2, b2);
  return std::hypot(p11 + p21, p12 + p22) + std::hypot(p11 - p21, p12 - p22);
}

namespace {

// Correlations restricted to the X-Z plane close the functional over a 2x2
// matrix T, making the scan cheap.
struct PlaneFunctional {
  double t[2][2];

  static PlaneFunctional from(const TwoQubitState& state) {
    PlaneFunctional f;
    const Mat2 sigma[2] = {pauli_x(), pauli_z()};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) f.t[i][j] = expectation(state, sigma[i], sigma[j]);
    return f;
  }

  double corr(double a, double gb) const {
    const double u[2] = {std::cos(a), std::sin(a)};
    const double v[2] = {std::cos(gb), std::sin(gb)};
    double s = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) s += u[i] * t[i][j] * v[j];
    return s;
  }

  double value(double alpha, double beta, double gamma) const {
    const double g2 = gamma + std::numbers::pi / 2.0;  // B2 orthogonal to B1
    const double p11 = corr(alpha, gamma);
    const double p12 = corr(alpha, g2);
    const double p21 = corr(beta, gamma);
    const double p22 = corr(beta, g2);
    return std::hypot(p11 + p21, p12 + p22) + std::hypot(p11 - p21, p12 - p22);
  }
};

}  // namespace

ChshResult chsh_optimized(const TwoQubitState& state) {
  const PlaneFunctional f = PlaneFunctional::from(state);
  constexpr double two_pi = 2.0 * std::numbers::pi;

  double best[3] = {0.0, 0.0, 0.0};
  double best_value = -1.0;
  const int grid = 48;
  for (int ia = 0; ia < grid; ++ia)
    for (int ib = 0; ib < grid; ++ib)
      for (int ig = 0; ig < grid / 2; ++ig) {
        const double a = two_pi * ia / grid;
        const double b = two_pi * ib / grid;
        const double g = two_pi * ig / grid;
        const double v = f.value(a, b, g);
        if (v > best_value) {
          best_value = v;
          best[0] = a;
          best[1] = b;
          best[2] = g;
        }
      }

  // Coordinate-wise golden-section refinement around the best grid node.
  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  double span = two_pi / grid;
  for (int round = 0; round < 40; ++round) {
    for (int coord = 0; coord < 3; ++coord) {
      double lo = best[coord] - span;
      double hi = best[coord] + span;
      double x1 = hi - golden * (hi - lo);
      double x2 = lo + golden * (hi - lo);
      auto eval = [&](double x) {
        double arg[3] = {best[0], best[1], best[2]};
        arg[coord] = x;
        return f.value(arg[0], arg[1], arg[2]);
      };
      double f1 = eval(x1);
      double f2 = eval(x2);
      for (int it = 0; it < 24; ++it) {
        if (f1 < f2) {
          lo = x1;
          x1 = x2;
          f1 = f2;
          x2 = lo + golden * (hi - lo);
          f2 = eval(x2);
        } else {
          hi = x2;
          x2 = x1;
          f2 = f1;
          x1 = hi - golden * (hi - lo);
          f1 = eval(x1);
        }
      }
      best[coord] = 0.5 * (lo + hi);
      const double v = f.value(best[0], best[1], best[2]);
      if (v > best_value) best_value = v;
    }
    span *= 0.35;
  }

  return {best_value, best[0], best[1], best[2], best_value > 2.0};
}

}  // namespace steerlab
