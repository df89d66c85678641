#pragma once

#include <cmath>
#include <stdexcept>

#include "rlab/rational.hpp"

namespace rlab {

// Exponent arithmetic is exact end-to-end; doubles appear only when a caller
// feeds thresholds into a numerical experiment.

// p_bar(k,n) = 2(n+k)/(n+k-2), the critical broad-norm exponent.
inline Rational critical_exponent(int k, int n) {
  if (k < 2 || k > n) throw std::domain_error("critical_exponent: need 2 <= k <= n");
  return Rational(2) * Rational(n + k, n + k - 2);
}

// Linear restriction range split by parity of the dimension.
inline Rational theorem1_exponent(int n) {
  if (n < 2) throw std::domain_error("theorem1_exponent: need n >= 2");
  if (n % 2 == 1) return Rational(2) * Rational(3 * n + 1, 3 * n - 3);
  return Rational(2) * Rational(3 * n + 2, 3 * n - 2);
}

// e(k,n,p) = (1/2)(1/2 - 1/p)(n+k).
inline Rational broad_e(int k, int n, const Rational& p) {
  if (p < Rational(2)) throw std::domain_error("broad_e: need p >= 2");
  return Rational(1, 2) * (Rational(1, 2) - Rational(1) / p) * Rational(n + k);
}

// Lower end of the range where a k-broad estimate upgrades to a regular L^p
// estimate: 2(2n-k+2)/(2n-k).
inline Rational regular_lower_bound(int k, int n) {
  if (k < 2 || k > n) throw std::domain_error("regular_lower_bound: need 2 <= k <= n");
  return Rational(2) * Rational(2 * n - k + 2, 2 * n - k);
}

// k = n/2 + 1 for even n, (n+1)/2 for odd n.
inline int choose_k(int n) {
  if (n < 2) throw std::domain_error("choose_k: need n >= 2");
  return (n % 2 == 0) ? n / 2 + 1 : (n + 1) / 2;
}

// Exponent of R in the slab example ratio R^{1/2} |W|^{1/p - 1/2} with
// |W| ~ R^k R^{(n-k)/2}; vanishes exactly at p = critical_exponent(k,n).
inline Rational predicted_slab_exponent(int n, int k, const Rational& p) {
  if (p < Rational(2)) throw std::domain_error("predicted_slab_exponent: need p >= 2");
  Rational slab_dim = Rational(k) + Rational(n - k, 2);
  return Rational(1, 2) + (Rational(1) / p - Rational(1, 2)) * slab_dim;
}

// Solves rho^{1/2+delta_l} = R^{1/2+delta_m} for rho.
inline double solve_rho(double R, double delta_m, double delta_l) {
  if (R <= 1.0) throw std::domain_error("solve_rho: need R > 1");
  return std::pow(R, (0.5 + delta_m) / (0.5 + delta_l));
}

}  // namespace rlab
