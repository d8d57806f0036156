#pragma once

namespace steerlab {

/// Physicists' Hermite polynomial H_n(x), forward recurrence.
/// Throws std::domain_error for n < 0.
double hermite(int n, double x);

/// Generalized Laguerre polynomial L_n^alpha(x), forward recurrence.
/// Throws std::domain_error for n < 0 or alpha < 0.
double laguerre(int n, int alpha, double x);

}  // namespace steerlab
