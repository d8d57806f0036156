#include "steerlab/special_functions.hpp"

#include <stdexcept>

namespace steerlab {

double hermite(int n, double x) {
  if (n < 0) throw std::domain_error("hermite: order must be nonnegative");
  // H_0 = 1, H_1 = 2x, H_{k+1} = 2x H_k - 2k H_{k-1}.
  double prev = 1.0;
  if (n == 0) return prev;
  double cur = 2.0 * x;
  for (int k = 1; k < n; ++k) {
    const double next = 2.0 * x * cur - 2.0 * k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double laguerre(int n, int alpha, double x) {
  if (n < 0) throw std::domain_error("laguerre: degree must be nonnegative");
  if (alpha < 0) throw std::domain_error("laguerre: alpha must be nonnegative");
  // L_0 = 1, L_1 = 1 + alpha - x,
  // (k+1) L_{k+1} = (2k + 1 + alpha - x) L_k - (k + alpha) L_{k-1}.
  double prev = 1.0;
  if (n == 0) return prev;
  double cur = 1.0 + alpha - x;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace steerlab
