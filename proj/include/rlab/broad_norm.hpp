#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "rlab/errors.hpp"
#include "rlab/extension.hpp"
#include "rlab/geometry.hpp"
#include "rlab/grid.hpp"
#include "rlab/rational.hpp"
#include "rlab/rng.hpp"

namespace rlab {

// k-broad norm machinery:
//   mu_{Ef}(B_{K^2}) = min_{V_1..V_A} max_{tau: angle(G(tau),V_a) > 1/K for all a}
//                        int_{B_{K^2}} |Ef_tau|^p
//   ||Ef||_{BL^p_{k,A}(B_R)}^p = sum over B_{K^2} of mu.
// Balls are cubes of side K^2 tiling B_R on a centered lattice; the min over
// all (k-1)-subspaces is taken over an explicit finite candidate family.

struct BroadParams {
  int k = 2;
  int A = 0;
  double K = 8.0;
  double p = 2.0;
};

struct BallCover {
  std::vector<Vec> centers;
  double side = 0.0;  // cube side K^2

  std::size_t size() const { return centers.size(); }
};

// Cubes of side K^2, centers on the K^2 Z^n lattice (one cube centered at the
// origin), kept when they intersect B_R: disjoint, bounded overlap, and the
// union covers B_R.
inline BallCover make_ball_cover(double R, double K, int n) {
  BallCover cover;
  cover.side = K * K;
  const double half = 0.5 * cover.side;
  const int kmax = static_cast<int>(std::ceil(R / cover.side)) + 1;
  std::vector<int> idx(static_cast<std::size_t>(n), -kmax);
  for (;;) {
    Vec c(static_cast<std::size_t>(n));
    double nearest_norm2 = 0.0;
    for (int a = 0; a < n; ++a) {
      c[static_cast<std::size_t>(a)] = idx[static_cast<std::size_t>(a)] * cover.side;
      const double m = std::max(0.0, std::fabs(c[static_cast<std::size_t>(a)]) - half);
      nearest_norm2 += m * m;
    }
    if (nearest_norm2 <= R * R) cover.centers.push_back(std::move(c));
    int a = n - 1;
    for (; a >= 0; --a) {
      if (++idx[static_cast<std::size_t>(a)] <= kmax) break;
      idx[static_cast<std::size_t>(a)] = -kmax;
    }
    if (a < 0) break;
  }
  return cover;
}

// Coarse caps tau: cubes of side 2/K tiling B^{n-1} (sharp partition).
struct CoarseCaps {
  std::vector<Cap> caps;
  double spacing = 0.0;

  int index_of(const Vec& omega) const {
    // nearest center on the lattice
    int best = -1;
    double bd = 1e300;
    for (std::size_t i = 0; i < caps.size(); ++i) {
      double d = dist(omega, caps[i].center);
      if (d < bd) {
        bd = d;
        best = static_cast<int>(i);
      }
    }
    return best;
  }
};

inline CoarseCaps make_coarse_caps(double K, int n) {
  CoarseCaps out;
  out.spacing = 2.0 / K;
  const int d = n - 1;
  const int kmax = static_cast<int>(std::ceil(K / 2.0));
  std::vector<int> idx(static_cast<std::size_t>(d), -kmax);
  for (;;) {
    Vec c(static_cast<std::size_t>(d));
    double cn2 = 0.0;
    for (int a = 0; a < d; ++a) {
      c[static_cast<std::size_t>(a)] = (idx[static_cast<std::size_t>(a)] + 0.5) * out.spacing;
      cn2 += c[static_cast<std::size_t>(a)] * c[static_cast<std::size_t>(a)];
    }
    // keep cells whose center is within the unit ball plus half a cell
    if (std::sqrt(cn2) <= 1.0 + 0.5 * out.spacing)
      out.caps.emplace_back(std::move(c), 1.0 / K, ScaleTag::coarse);
    int a = d - 1;
    for (; a >= 0; --a) {
      if (++idx[static_cast<std::size_t>(a)] <= kmax - 1) break;
      idx[static_cast<std::size_t>(a)] = -kmax;
    }
    if (a < 0) break;
  }
  return out;
}

// Per-(tau, ball) integrals of |Ef_tau|^p at unit-spacing midpoint grids.
struct CoarseFieldBundle {
  int n = 2;
  double R = 0.0;
  BroadParams params;
  CoarseCaps caps;
  BallCover cover;
  // integrals[e][ball][tau] for each requested exponent e
  std::vector<double> exponents;
  std::vector<std::vector<std::vector<double>>> integrals;

  const std::vector<std::vector<double>>& integrals_for(double p) const {
    for (std::size_t e = 0; e < exponents.size(); ++e)
      if (std::fabs(exponents[e] - p) < 1e-12) return integrals[e];
    throw std::domain_error("CoarseFieldBundle: exponent not precomputed");
  }
};

// Sharp tau-restriction of f: samples outside tau zeroed.
inline DensityFunction restrict_to_cap(const DensityFunction& f, const CoarseCaps& caps, int tau) {
  DensityFunction g = f;
  const std::size_t total = g.total_count();
  for (std::size_t i = 0; i < total; ++i) {
    if (g.at(i) == cplx(0.0, 0.0)) continue;
    if (caps.index_of(g.omega_at(i)) != tau) g.at(i) = cplx(0.0, 0.0);
  }
  return g;
}

// Midpoint sample points of a cube at unit spacing.
inline std::vector<Vec> cube_midpoints(const Vec& center, double side) {
  const int n = static_cast<int>(center.size());
  const int per = std::max(1, static_cast<int>(std::lround(side)));
  std::vector<Vec> pts;
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  for (;;) {
    Vec x(center.size());
    for (int a = 0; a < n; ++a)
      x[static_cast<std::size_t>(a)] =
          center[static_cast<std::size_t>(a)] - 0.5 * side + (idx[static_cast<std::size_t>(a)] + 0.5);
    pts.push_back(std::move(x));
    int a = n - 1;
    for (; a >= 0; --a) {
      if (++idx[static_cast<std::size_t>(a)] < per) break;
      idx[static_cast<std::size_t>(a)] = 0;
    }
    if (a < 0) break;
  }
  return pts;
}

// Builds the bundle: evaluates every Ef_tau on every ball at unit spacing and
// stores sum |Ef_tau|^p per (ball, tau) for each requested exponent.
// For n = 2 the evaluation runs on rows via the phasor fast path.
inline CoarseFieldBundle make_bundle(const DensityFunction& f, double R, const BroadParams& params,
                                     const std::vector<double>& exponents_wanted,
                                     double c_quad = kDefaultCQuad) {
  CoarseFieldBundle b;
  b.n = f.n();
  b.R = R;
  b.params = params;
  b.caps = make_coarse_caps(params.K, f.n());
  b.cover = make_ball_cover(R, params.K, f.n());
  b.exponents = exponents_wanted;
  const std::size_t ntau = b.caps.caps.size();
  const std::size_t nball = b.cover.size();
  b.integrals.assign(exponents_wanted.size(),
                     std::vector<std::vector<double>>(nball, std::vector<double>(ntau, 0.0)));

  // cap index per omega sample, computed once
  const std::size_t total = f.total_count();
  std::vector<int> cap_of(total, -1);
  for (std::size_t i = 0; i < total; ++i)
    if (f.at(i) != cplx(0.0, 0.0)) cap_of[i] = b.caps.index_of(f.omega_at(i));

  if (f.n() == 2) {
    // all balls share the unit-spacing row structure
    for (std::size_t tau = 0; tau < ntau; ++tau) {
      DensityFunction ftau = f;
      bool any = false;
      for (std::size_t i = 0; i < total; ++i) {
        if (cap_of[i] != static_cast<int>(tau)) ftau.at(i) = cplx(0.0, 0.0);
        else if (ftau.at(i) != cplx(0.0, 0.0)) any = true;
      }
      if (!any) continue;
      // group balls by x2-rows
      for (std::size_t bi = 0; bi < nball; ++bi) {
        const Vec& c = b.cover.centers[bi];
        const double side = b.cover.side;
        const int per = static_cast<int>(std::lround(side));
        AxisGrid xg{c[0] - 0.5 * side + 0.5, 1.0, per};
        for (int row = 0; row < per; ++row) {
          const double xn = c[1] - 0.5 * side + row + 0.5;
          if (std::fabs(xn) > R) continue;
          auto vals = evaluate_extension_row(ftau, xg, xn, c_quad);
          for (std::size_t e = 0; e < b.exponents.size(); ++e) {
            double s = 0.0;
            const double pe = b.exponents[e];
            for (int i = 0; i < xg.count; ++i) {
              const double x1 = xg.point(i);
              if (x1 * x1 + xn * xn > R * R) continue;  // integrate over the cube clipped to B_R
              s += std::pow(std::abs(vals[static_cast<std::size_t>(i)]), pe);
            }
            b.integrals[e][bi][tau] += s;
          }
        }
      }
    }
  } else {
    for (std::size_t tau = 0; tau < ntau; ++tau) {
      DensityFunction ftau = f;
      bool any = false;
      for (std::size_t i = 0; i < total; ++i) {
        if (cap_of[i] != static_cast<int>(tau)) ftau.at(i) = cplx(0.0, 0.0);
        else if (ftau.at(i) != cplx(0.0, 0.0)) any = true;
      }
      if (!any) continue;
      for (std::size_t bi = 0; bi < nball; ++bi) {
        auto pts = cube_midpoints(b.cover.centers[bi], b.cover.side);
        std::vector<Vec> clipped;
        for (auto& x : pts)
          if (norm(x) <= R) clipped.push_back(std::move(x));
        if (clipped.empty()) continue;
        auto field = evaluate_extension(ftau, clipped, R, c_quad, 2);
        for (std::size_t e = 0; e < b.exponents.size(); ++e) {
          double s = 0.0;
          for (const auto& v : field.values) s += std::pow(std::abs(v), b.exponents[e]);
          b.integrals[e][bi][tau] += s;
        }
      }
    }
  }
  return b;
}

// Candidate (k-1)-subspaces for the min-max.
enum class CandidateStrategy { caps, random };

inline std::vector<Subspace> candidate_subspaces(const CoarseCaps& caps, int n, int k,
                                                 CandidateStrategy strategy = CandidateStrategy::caps,
                                                 int random_count = 0, std::uint64_t seed = 0,
                                                 std::size_t limit = 1000000) {
  const int d = k - 1;
  if (d < 1 || d > n - 1) throw std::domain_error("candidate_subspaces: need 1 <= k-1 <= n-1");
  std::vector<Vec> dirs;
  for (const auto& c : caps.caps) dirs.push_back(direction_of(c.center));

  std::vector<Subspace> out;
  auto push_dedup = [&](Subspace s) {
    for (const auto& o : out)
      if (o.dim() == s.dim() && largest_principal_angle(o, s) < 1e-6) return;
    out.push_back(std::move(s));
  };

  if (strategy == CandidateStrategy::caps || d == 1) {
    // all spans of (k-1)-subsets of cap directions
    const std::size_t m = dirs.size();
    double count_est = 1.0;
    for (int i = 0; i < d; ++i) count_est *= static_cast<double>(m - i) / (i + 1);
    if (count_est > static_cast<double>(limit))
      throw CombinatorialBlowup("C(" + std::to_string(m) + "," + std::to_string(d) + ") too large");
    std::vector<std::size_t> comb(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) comb[static_cast<std::size_t>(i)] = static_cast<std::size_t>(i);
    if (m >= static_cast<std::size_t>(d)) {
      for (;;) {
        std::vector<Vec> span;
        for (auto i : comb) span.push_back(dirs[i]);
        try {
          Subspace s = Subspace::span_of(span);
          if (s.dim() == d) push_dedup(std::move(s));
        } catch (const std::domain_error&) {
          // rank-deficient subset, skip
        }
        int i = d - 1;
        for (; i >= 0; --i) {
          if (++comb[static_cast<std::size_t>(i)] <= m - static_cast<std::size_t>(d - i)) {
            for (int j = i + 1; j < d; ++j)
              comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
            break;
          }
        }
        if (i < 0) break;
      }
    }
  }
  if (strategy == CandidateStrategy::random) {
    Rng rng(seed);
    for (int t = 0; t < random_count; ++t) {
      std::vector<Vec> span;
      for (int i = 0; i < d; ++i) span.push_back(rng.gaussian_vector(n));
      try {
        Subspace s = Subspace::span_of(span);
        if (s.dim() == d) push_dedup(std::move(s));
      } catch (const std::domain_error&) {
      }
    }
  }
  return out;
}

// Exact min-max over A-tuples of candidate subspaces for one ball.
// Ties broken by lexicographic tuple order (the first minimizer wins).
inline double mu_broad(const CoarseFieldBundle& bundle, std::size_t ball, const BroadParams& params,
                       const std::vector<Subspace>& candidates,
                       std::vector<int>* chosen_tuple = nullptr) {
  const auto& per_tau = bundle.integrals_for(params.p)[ball];
  const std::size_t ntau = per_tau.size();
  const double angle_thresh = 1.0 / params.K;

  if (params.A == 0) {
    double m = 0.0;
    for (std::size_t t = 0; t < ntau; ++t) m = std::max(m, per_tau[t]);
    if (chosen_tuple) chosen_tuple->clear();
    return m;
  }
  if (candidates.empty()) throw std::domain_error("mu_broad: A >= 1 needs candidates");

  // precompute exclusion bitmap: excluded[c][tau] = angle(G(tau), V_c) <= 1/K
  std::vector<std::vector<char>> excluded(candidates.size(), std::vector<char>(ntau, 0));
  for (std::size_t c = 0; c < candidates.size(); ++c)
    for (std::size_t t = 0; t < ntau; ++t) {
      const double ang = angle_to_subspace(direction_of(bundle.caps.caps[t].center), candidates[c]);
      excluded[c][t] = ang <= angle_thresh ? 1 : 0;
    }

  std::vector<std::size_t> tuple(static_cast<std::size_t>(params.A), 0);
  double best = -1.0;
  std::vector<int> best_tuple;
  for (;;) {
    double m = 0.0;
    for (std::size_t t = 0; t < ntau; ++t) {
      bool excl = false;
      for (std::size_t a = 0; a < tuple.size(); ++a)
        if (excluded[tuple[a]][t]) {
          excl = true;
          break;
        }
      if (!excl) m = std::max(m, per_tau[t]);
    }
    if (best < 0.0 || m < best) {
      best = m;
      if (chosen_tuple) {
        best_tuple.assign(tuple.begin(), tuple.end());
      }
    }
    int a = params.A - 1;
    for (; a >= 0; --a) {
      if (++tuple[static_cast<std::size_t>(a)] < candidates.size()) break;
      tuple[static_cast<std::size_t>(a)] = 0;
    }
    if (a < 0) break;
  }
  if (chosen_tuple) *chosen_tuple = best_tuple;
  return best;
}

inline double bl_norm_from_bundle(const CoarseFieldBundle& bundle, const BroadParams& params,
                                  const std::vector<Subspace>& candidates) {
  double s = 0.0;
  for (std::size_t b = 0; b < bundle.cover.size(); ++b)
    s += mu_broad(bundle, b, params, candidates);
  return std::pow(s, 1.0 / params.p);
}

inline double bl_norm(const DensityFunction& f, double R, const BroadParams& params,
                      const std::vector<Subspace>& candidates, double c_quad = kDefaultCQuad) {
  auto bundle = make_bundle(f, R, params, {params.p}, c_quad);
  return bl_norm_from_bundle(bundle, params, candidates);
}

// --- quasi-norm algebra checks ---------------------------------------------

struct TriangleReport {
  int trials = 0;
  int violations = 0;
  double worst_ratio = 0.0;  // max over trials of lhs / (C_tri * (|g| + |h|))
};

// One triangle check: ||E(g+h)||_{BL,A} <= C_tri (||Eg||_{BL,A/2} + ||Eh||_{BL,A/2})
// with C_tri = 2^{1/p} * 2, same candidate family on both sides.
inline bool check_triangle(const DensityFunction& g, const DensityFunction& h, double R,
                           const BroadParams& params, const std::vector<Subspace>& candidates,
                           double* ratio_out = nullptr, double c_quad = kDefaultCQuad) {
  if (params.A % 2 != 0) throw std::domain_error("check_triangle: A must be even");
  DensityFunction f = g;
  f.add_scaled(h, cplx(1.0, 0.0));
  BroadParams half = params;
  half.A = params.A / 2;
  const double lhs = bl_norm(f, R, params, candidates, c_quad);
  const double rg = bl_norm(g, R, half, candidates, c_quad);
  const double rh = bl_norm(h, R, half, candidates, c_quad);
  const double C_tri = std::pow(2.0, 1.0 / params.p) * 2.0;
  const double rhs = C_tri * (rg + rh);
  if (ratio_out) *ratio_out = rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? 1e300 : 0.0);
  return lhs <= rhs * (1.0 + 1e-12);
}

// One Holder check: ||Ef||_{BL^p_{k,A}} <= ||Ef||^{a1}_{BL^{p1}_{k,A1}} ||Ef||^{a2}_{BL^{p2}_{k,A2}}
// with exact rational relation 1/p = a1/p1 + a2/p2, a1 + a2 = 1, A = A1 + A2.
inline bool check_holder(const DensityFunction& f, double R, int k, double K, int A1, int A2,
                         const Rational& p1, const Rational& p2, const Rational& alpha1,
                         const Rational& alpha2, const std::vector<Subspace>& candidates,
                         double* ratio_out = nullptr, double c_quad = kDefaultCQuad) {
  if (alpha1 + alpha2 != Rational(1)) throw ExponentRelationViolated("alpha1 + alpha2 != 1");
  // 1/p = alpha1/p1 + alpha2/p2, exact
  const Rational inv_p = alpha1 / p1 + alpha2 / p2;
  if (inv_p <= Rational(0)) throw ExponentRelationViolated("1/p <= 0");
  const Rational p = Rational(1) / inv_p;

  BroadParams pp{k, A1 + A2, K, p.to_double()};
  BroadParams pp1{k, A1, K, p1.to_double()};
  BroadParams pp2{k, A2, K, p2.to_double()};
  auto bundle = make_bundle(f, R, pp, {p.to_double(), p1.to_double(), p2.to_double()}, c_quad);
  const double lhs = bl_norm_from_bundle(bundle, pp, candidates);
  const double r1 = bl_norm_from_bundle(bundle, pp1, candidates);
  const double r2 = bl_norm_from_bundle(bundle, pp2, candidates);
  const double rhs = std::pow(r1, alpha1.to_double()) * std::pow(r2, alpha2.to_double());
  if (ratio_out) *ratio_out = rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? 1e300 : 0.0);
  return lhs <= rhs * (1.0 + 1e-9);
}

// Caps tau with angle(G(tau), V) <= 1/K; the narrow-cap count of the
// decoupling step, bounded by ~K^{k-2}.
inline int narrow_cap_count(const CoarseCaps& caps, const Subspace& V, double K) {
  int c = 0;
  for (const auto& cap : caps.caps)
    if (angle_to_subspace(direction_of(cap.center), V) <= 1.0 / K) ++c;
  return c;
}

}  // namespace rlab
