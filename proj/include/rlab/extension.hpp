#pragma once

#include <cmath>
#include <thread>
#include <utility>
#include <vector>

#include "rlab/errors.hpp"
#include "rlab/grid.hpp"

namespace rlab {

// Ef(x) = int_{B^{n-1}} e^{i(x' . omega + x_n |omega|^2)} f(omega) d omega,
// by trapezoid quadrature on f's grid.  The grid must resolve the phase: the
// instantaneous frequency is x' + 2 x_n omega, so we require
//   h_omega <= c_quad / phase_scale,   phase_scale = max (|x'| + 2|x_n|) / 3,
// which reduces to the h_omega <= c_quad / R rule on |x| <= R.

inline constexpr double kDefaultCQuad = 0.25;

inline double phase_scale_of_points(const std::vector<Vec>& points) {
  double m = 1.0;
  for (const auto& x : points) {
    double xp = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) xp += x[i] * x[i];
    m = std::max(m, (std::sqrt(xp) + 2.0 * std::fabs(x.back())) / 3.0);
  }
  return m;
}

inline void require_resolution(const DensityFunction& f, double phase_scale, double c_quad) {
  if (f.h_omega() > c_quad / phase_scale * (1.0 + 1e-12))
    throw ResolutionTooCoarse("h_omega = " + std::to_string(f.h_omega()) + " but need <= " +
                              std::to_string(c_quad / phase_scale));
}

namespace detail {

// Nonzero samples flattened for the hot loop.
struct QuadTerms {
  std::vector<Vec> omega;
  std::vector<double> omega2;  // |omega|^2
  std::vector<cplx> wf;        // weight * f
};

inline QuadTerms collect_terms(const DensityFunction& f) {
  QuadTerms t;
  const auto& s = f.samples();
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == cplx(0.0, 0.0)) continue;
    Vec w = f.omega_at(i);
    t.omega2.push_back(norm2(w));
    t.omega.push_back(std::move(w));
    t.wf.push_back(f.weight(i) * s[i]);
  }
  return t;
}

inline cplx eval_point(const QuadTerms& t, const Vec& x) {
  const std::size_t d = x.size() - 1;
  const double xn = x.back();
  cplx acc(0.0, 0.0);
  for (std::size_t j = 0; j < t.wf.size(); ++j) {
    double phase = xn * t.omega2[j];
    const Vec& w = t.omega[j];
    for (std::size_t i = 0; i < d; ++i) phase += x[i] * w[i];
    acc += t.wf[j] * cplx(std::cos(phase), std::sin(phase));
  }
  return acc;
}

}  // namespace detail

inline SampledField evaluate_extension(const DensityFunction& f, const std::vector<Vec>& points,
                                       double R, double c_quad = kDefaultCQuad, int threads = 1) {
  require_resolution(f, phase_scale_of_points(points), c_quad);
  SampledField out;
  out.points = points;
  out.values.assign(points.size(), cplx(0.0, 0.0));
  out.R = R;
  const auto terms = detail::collect_terms(f);
  auto work = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) out.values[i] = detail::eval_point(terms, points[i]);
  };
  if (threads <= 1 || points.size() < 64) {
    work(0, points.size());
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (points.size() + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      std::size_t lo = chunk * static_cast<std::size_t>(t);
      std::size_t hi = std::min(points.size(), lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(work, lo, hi);
    }
    for (auto& th : pool) th.join();
  }
  return out;
}

// Fast path for n = 2: evaluates Ef on uniform x1-rows by phasor recurrence
// (one complex multiply per term per point, no trig in the inner loop).
// Matches the direct path to ~1e-12 relative.
inline std::vector<cplx> evaluate_extension_row(const DensityFunction& f, const AxisGrid& x1_grid,
                                                double xn, double c_quad = kDefaultCQuad) {
  if (f.dim_omega() != 1) throw std::domain_error("evaluate_extension_row: needs n = 2");
  const double max_x1 = std::max(std::fabs(x1_grid.lo), std::fabs(x1_grid.hi()));
  require_resolution(f, (max_x1 + 2.0 * std::fabs(xn)) / 3.0, c_quad);
  const auto& ax = f.axes()[0];
  std::vector<cplx> c;
  std::vector<cplx> m;
  c.reserve(static_cast<std::size_t>(ax.count));
  m.reserve(static_cast<std::size_t>(ax.count));
  for (int j = 0; j < ax.count; ++j) {
    const cplx fj = f.at(static_cast<std::size_t>(j));
    if (fj == cplx(0.0, 0.0)) continue;
    const double w = ax.point(j);
    double wq = ax.h;
    if (j == 0 || j + 1 == ax.count) wq *= 0.5;
    const double phase0 = x1_grid.lo * w + xn * w * w;
    c.push_back(wq * fj * cplx(std::cos(phase0), std::sin(phase0)));
    m.push_back(cplx(std::cos(x1_grid.h * w), std::sin(x1_grid.h * w)));
  }
  std::vector<cplx> row(static_cast<std::size_t>(x1_grid.count));
  for (int k = 0; k < x1_grid.count; ++k) {
    cplx acc(0.0, 0.0);
    for (std::size_t j = 0; j < c.size(); ++j) {
      acc += c[j];
      c[j] *= m[j];
    }
    row[static_cast<std::size_t>(k)] = acc;
  }
  return row;
}

// Plancherel slice check: returns (normalized slice L2 norm, ||f||_2).  The
// slice norm carries the (2pi)^{(n-1)/2} quadrature normalization so that the
// exact identity makes the ratio 1.
inline std::pair<double, double> slice_l2(const DensityFunction& f, double R, double xn,
                                          double W_slice = -1.0, double c_quad = kDefaultCQuad,
                                          int threads = 1) {
  if (W_slice <= 0.0) W_slice = 8.0 * R;
  const int d = f.dim_omega();
  const double fl2 = f.l2_norm();
  double slice2 = 0.0;
  const int count = 2 * static_cast<int>(std::ceil(W_slice)) + 1;  // unit spacing
  AxisGrid sg = symmetric_axis(std::ceil(W_slice), count);
  if (d == 1) {
    const double max_x1 = W_slice;
    require_resolution(f, (max_x1 + 2.0 * std::fabs(xn)) / 3.0, c_quad);
    auto row = evaluate_extension_row(f, sg, xn, c_quad);
    for (const auto& v : row) slice2 += std::norm(v);
  } else {
    std::vector<Vec> pts;
    pts.reserve(static_cast<std::size_t>(count) * static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
      for (int j = 0; j < count; ++j) pts.push_back({sg.point(i), sg.point(j), xn});
    auto field = evaluate_extension(f, pts, R, c_quad, threads);
    for (const auto& v : field.values) slice2 += std::norm(v);
  }
  const double twopi = 6.283185307179586476925286766559;
  double normalized = std::sqrt(slice2 / std::pow(twopi, d));
  return {normalized, fl2};
}

// f~(omega) = e^{i(y' . omega + y_n |omega|^2)} f(omega); then
// Ef(x) = Ef~(x - y).
inline DensityFunction modulate_to_ball(const DensityFunction& f, const Vec& y) {
  if (static_cast<int>(y.size()) != f.n()) throw std::domain_error("modulate_to_ball: y must be in R^n");
  DensityFunction g = f;
  const std::size_t total = g.total_count();
  for (std::size_t i = 0; i < total; ++i) {
    if (g.at(i) == cplx(0.0, 0.0)) continue;
    Vec w = g.omega_at(i);
    double phase = y.back() * norm2(w);
    for (std::size_t a = 0; a < w.size(); ++a) phase += y[a] * w[a];
    g.at(i) *= cplx(std::cos(phase), std::sin(phase));
  }
  return g;
}

// Affine change of variables of the parabolic rescaling
//   omega~ = K (omega - omega_tau),
//   x~_j = K^{-1}(x_j + 2 omega_{tau,j} x_n),  x~_n = K^{-2} x_n,
// under which |Ef_tau(x)| = K^{-(n-1)} |Ef~_tau(x~)|.
struct ParabolicMap {
  Vec omega_tau;
  double K = 1.0;

  Vec apply(const Vec& x) const {
    const std::size_t d = omega_tau.size();
    Vec xt(d + 1);
    for (std::size_t j = 0; j < d; ++j) xt[j] = (x[j] + 2.0 * omega_tau[j] * x[d]) / K;
    xt[d] = x[d] / (K * K);
    return xt;
  }
  double jacobian() const { return std::pow(K, -static_cast<double>(omega_tau.size() + 2)); }
  double amplitude_factor(int n) const { return std::pow(K, -static_cast<double>(n - 1)); }
};

inline std::pair<DensityFunction, ParabolicMap> parabolic_rescale(const DensityFunction& f,
                                                                  const Cap& tau, double K,
                                                                  double support_tol = 1e-9) {
  if (tau.ambient_dim() != f.n()) throw std::domain_error("parabolic_rescale: dimension mismatch");
  // mass outside tau must be negligible
  double inside = 0.0, outside = 0.0;
  const std::size_t total = f.total_count();
  for (std::size_t i = 0; i < total; ++i) {
    const double m = f.weight(i) * std::norm(f.at(i));
    if (m == 0.0) continue;
    if (dist(f.omega_at(i), tau.center) <= tau.radius * (1.0 + 1e-12))
      inside += m;
    else
      outside += m;
  }
  if (outside > support_tol * (inside + outside) && inside + outside > 0.0)
    throw SupportViolation("mass fraction outside tau = " + std::to_string(outside / (inside + outside)));

  // omega~ grid: the K-dilated image of f's grid window around tau.
  const int d = f.dim_omega();
  std::vector<AxisGrid> axes(static_cast<std::size_t>(d));
  std::vector<int> start(static_cast<std::size_t>(d));
  for (int a = 0; a < d; ++a) {
    const auto& ax = f.axes()[static_cast<std::size_t>(a)];
    int i0 = std::max(0, static_cast<int>(std::floor((tau.center[static_cast<std::size_t>(a)] -
                                                      tau.radius - ax.lo) / ax.h)));
    int i1 = std::min(ax.count - 1, static_cast<int>(std::ceil((tau.center[static_cast<std::size_t>(a)] +
                                                                tau.radius - ax.lo) / ax.h)));
    if (i1 <= i0) throw std::domain_error("parabolic_rescale: empty window");
    axes[static_cast<std::size_t>(a)] = AxisGrid{K * (ax.point(i0) - tau.center[static_cast<std::size_t>(a)]),
                                                 K * ax.h, i1 - i0 + 1};
    start[static_cast<std::size_t>(a)] = i0;
  }
  DensityFunction ft(f.n(), axes);
  const std::size_t ft_total = ft.total_count();
  for (std::size_t fi = 0; fi < ft_total; ++fi) {
    // map window index to f's flat index
    std::size_t rem = fi, flat = 0;
    std::vector<std::size_t> idx(static_cast<std::size_t>(d));
    for (int a = d - 1; a >= 0; --a) {
      const auto c = static_cast<std::size_t>(axes[static_cast<std::size_t>(a)].count);
      idx[static_cast<std::size_t>(a)] = rem % c;
      rem /= c;
    }
    for (int a = 0; a < d; ++a) {
      std::size_t s = 1;
      for (int b = a + 1; b < d; ++b) s *= static_cast<std::size_t>(f.axes()[static_cast<std::size_t>(b)].count);
      flat += (idx[static_cast<std::size_t>(a)] + static_cast<std::size_t>(start[static_cast<std::size_t>(a)])) * s;
    }
    ft.at(fi) = f.at(flat);
  }
  ParabolicMap map{tau.center, K};
  return {std::move(ft), map};
}

}  // namespace rlab
