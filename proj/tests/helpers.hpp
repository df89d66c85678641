#pragma once

// Shared fixtures for the test suite: smooth compactly supported densities
// and small independent quadrature oracles.

#include <cmath>
#include <complex>
#include <functional>

#include "rlab/grid.hpp"
#include "rlab/rng.hpp"

namespace rlab_test {

using rlab::AxisGrid;
using rlab::cplx;
using rlab::DensityFunction;
using rlab::Rng;
using rlab::Vec;

// Standard bump: exp(-1/(1-t^2)) on |t|<1, zero outside.
inline double bump(double t) {
  double t2 = t * t;
  if (t2 >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - t2));
}

// Plateau cutoff: 1 on |t| <= a, smooth decay to 0 at |t| >= b.
inline double plateau(double t, double a, double b) {
  double u = std::fabs(t);
  if (u <= a) return 1.0;
  if (u >= b) return 0.0;
  double s = (u - a) / (b - a);  // in (0,1)
  // smooth step built from the bump's antiderivative shape
  double x = 1.0 - s;
  return std::exp(-1.0 / x) / (std::exp(-1.0 / x) + std::exp(-1.0 / s));
}

inline AxisGrid omega_axis_for(double phase_scale, double c_quad = 0.25) {
  int count = 2 * static_cast<int>(std::ceil(phase_scale / c_quad)) + 1;
  return rlab::symmetric_axis(1.0, count);
}

// Random smooth density: low-frequency trig polynomial under a plateau
// cutoff supported in |omega| <= 0.85.
inline std::function<cplx(const Vec&)> random_smooth_profile(Rng rng, int modes = 4) {
  std::vector<double> cr, ci, freq, phase;
  const int dim_guess = 4;  // coefficients reused across dims
  for (int j = 0; j < modes * dim_guess; ++j) {
    cr.push_back(rng.gaussian());
    ci.push_back(rng.gaussian());
    freq.push_back(rng.uniform(0.5, 3.0));
    phase.push_back(rng.uniform(0.0, 6.28318));
  }
  return [cr, ci, freq, phase, modes](const Vec& w) -> cplx {
    double cut = 1.0;
    for (double wi : w) cut *= plateau(wi, 0.65, 0.85);
    if (cut == 0.0) return {0.0, 0.0};
    cplx s(0.0, 0.0);
    int idx = 0;
    for (std::size_t a = 0; a < w.size(); ++a)
      for (int j = 0; j < modes; ++j, ++idx)
        s += cplx(cr[idx], ci[idx]) * std::cos(freq[idx] * 3.0 * w[a] + phase[idx]);
    return cut * (s + cplx(0.3, 0.0));
  };
}

inline DensityFunction random_smooth_density(int n, double phase_scale, Rng rng, int modes = 4) {
  std::vector<AxisGrid> axes(n - 1, omega_axis_for(phase_scale));
  DensityFunction f(n, axes);
  f.fill(random_smooth_profile(rng, modes));
  return f;
}

// Adaptive Simpson quadrature, an oracle independent of the trapezoid path.
inline cplx adaptive_simpson(const std::function<cplx(double)>& g, double a, double b, double tol,
                             int depth = 30) {
  auto simpson = [&](double lo, double hi) {
    return (hi - lo) / 6.0 * (g(lo) + 4.0 * g(0.5 * (lo + hi)) + g(hi));
  };
  std::function<cplx(double, double, cplx, int)> rec = [&](double lo, double hi, cplx whole,
                                                           int d) -> cplx {
    double mid = 0.5 * (lo + hi);
    cplx left = simpson(lo, mid), right = simpson(mid, hi);
    if (d <= 0 || std::abs(left + right - whole) < 15.0 * tol) {
      return left + right + (left + right - whole) / 15.0;
    }
    return rec(lo, mid, left, d - 1) + rec(mid, hi, right, d - 1);
  };
  return rec(a, b, simpson(a, b), depth);
}

}  // namespace rlab_test
