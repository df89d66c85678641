#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rlab/errors.hpp"
#include "rlab/extension.hpp"
#include "rlab/geometry.hpp"
#include "rlab/grid.hpp"
#include "rlab/polynomial.hpp"
#include "rlab/rng.hpp"

namespace rlab {

// Transverse complete intersections Z(P_1, ..., P_{n-m}); all set predicates
// are sampled (Newton projection from ambient seed grids), with the sampling
// density tied to the R^{1/2} scales of the tangency thresholds.

inline double wedge_norm(const std::vector<Vec>& grads) {
  // |g_1 ^ ... ^ g_k| = sqrt(det Gram)
  const std::size_t k = grads.size();
  std::vector<double> G(k * k, 0.0);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) G[i * k + j] = dot(grads[i], grads[j]);
  // Cholesky-free small determinant by Gaussian elimination
  double det = 1.0;
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < k; ++r)
      if (std::fabs(G[r * k + c]) > std::fabs(G[piv * k + c])) piv = r;
    if (std::fabs(G[piv * k + c]) < 1e-300) return 0.0;
    if (piv != c) {
      for (std::size_t cc = 0; cc < k; ++cc) std::swap(G[c * k + cc], G[piv * k + cc]);
      det = -det;
    }
    det *= G[c * k + c];
    for (std::size_t r = c + 1; r < k; ++r) {
      const double f = G[r * k + c] / G[c * k + c];
      for (std::size_t cc = c; cc < k; ++cc) G[r * k + cc] -= f * G[c * k + cc];
    }
  }
  return det > 0.0 ? std::sqrt(det) : 0.0;
}

struct VarietySystem {
  std::vector<PolynomialND> polys;  // n - m polynomials
  int n = 2;
  int m = 1;
  double degree_bound = 1.0;  // D_Z

  static constexpr double kOnVarietyTol = 1e-9;
  static constexpr double kWedgeTol = 1e-8;

  VarietySystem() = default;
  VarietySystem(std::vector<PolynomialND> ps, int ambient_n)
      : polys(std::move(ps)), n(ambient_n), m(ambient_n - static_cast<int>(polys.size())) {
    degree_bound = 1.0;
    for (const auto& p : polys) degree_bound = std::max(degree_bound, static_cast<double>(p.degree()));
  }

  double max_abs_value(const Vec& x) const {
    double v = 0.0;
    for (const auto& p : polys) v = std::max(v, std::fabs(p.eval(x)));
    return v;
  }

  std::vector<Vec> gradients(const Vec& x) const {
    std::vector<Vec> g;
    g.reserve(polys.size());
    for (const auto& p : polys) g.push_back(p.gradient(x));
    return g;
  }

  // Newton projection of a seed onto Z; empty when it fails to converge or
  // lands on a degenerate point.
  std::optional<Vec> project(Vec x, int max_iter = 40) const {
    const std::size_t k = polys.size();
    for (int it = 0; it < max_iter; ++it) {
      std::vector<double> F(k);
      double worst = 0.0;
      for (std::size_t i = 0; i < k; ++i) {
        F[i] = polys[i].eval(x);
        worst = std::max(worst, std::fabs(F[i]));
      }
      if (worst < kOnVarietyTol) {
        if (wedge_norm(gradients(x)) <= kWedgeTol) return std::nullopt;
        return x;
      }
      auto J = gradients(x);
      // least-norm step: x <- x - J^T (J J^T)^{-1} F
      std::vector<double> M(k * k, 0.0);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) M[i * k + j] = dot(J[i], J[j]);
      // solve M lambda = F
      std::vector<double> lambda = F;
      std::vector<double> A = M;
      bool singular = false;
      for (std::size_t c = 0; c < k; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < k; ++r)
          if (std::fabs(A[r * k + c]) > std::fabs(A[piv * k + c])) piv = r;
        if (std::fabs(A[piv * k + c]) < 1e-300) {
          singular = true;
          break;
        }
        if (piv != c) {
          for (std::size_t cc = 0; cc < k; ++cc) std::swap(A[c * k + cc], A[piv * k + cc]);
          std::swap(lambda[c], lambda[piv]);
        }
        for (std::size_t r = c + 1; r < k; ++r) {
          const double f = A[r * k + c] / A[c * k + c];
          for (std::size_t cc = c; cc < k; ++cc) A[r * k + cc] -= f * A[c * k + cc];
          lambda[r] -= f * lambda[c];
        }
      }
      if (singular) return std::nullopt;
      for (std::size_t c = k; c-- > 0;) {
        for (std::size_t cc = c + 1; cc < k; ++cc) lambda[c] -= A[c * k + cc] * lambda[cc];
        lambda[c] /= A[c * k + c];
      }
      for (std::size_t i = 0; i < k; ++i) x = axpy(-lambda[i], J[i], std::move(x));
    }
    return std::nullopt;
  }

  // Seeded sampling on Z inside an axis-aligned box.
  std::vector<Vec> sample_box(const Vec& lo, const Vec& hi, int target, std::uint64_t seed) const {
    std::vector<Vec> out;
    Rng rng = Rng(seed).derive("variety-sampler");
    const int budget = target * 12;
    for (int t = 0; t < budget && static_cast<int>(out.size()) < target; ++t) {
      Vec x(static_cast<std::size_t>(n));
      for (int a = 0; a < n; ++a)
        x[static_cast<std::size_t>(a)] =
            rng.uniform(lo[static_cast<std::size_t>(a)], hi[static_cast<std::size_t>(a)]);
      auto z = project(std::move(x));
      if (!z) continue;
      bool inside = true;
      for (int a = 0; a < n; ++a) {
        const double margin =
            0.05 * (hi[static_cast<std::size_t>(a)] - lo[static_cast<std::size_t>(a)]);
        if ((*z)[static_cast<std::size_t>(a)] < lo[static_cast<std::size_t>(a)] - margin ||
            (*z)[static_cast<std::size_t>(a)] > hi[static_cast<std::size_t>(a)] + margin)
          inside = false;
      }
      if (inside) out.push_back(std::move(*z));
    }
    return out;
  }
};

// Hyperplane {x . normal = offset} as a variety system.
inline VarietySystem hyperplane_variety(int n, const Vec& normal, double offset) {
  PolynomialND p(n, 1);
  for (int a = 0; a < n; ++a) {
    std::vector<int> e(static_cast<std::size_t>(n), 0);
    e[static_cast<std::size_t>(a)] = 1;
    p.coeffs()[p.index_of(e)] = normal[static_cast<std::size_t>(a)];
  }
  std::vector<int> zero(static_cast<std::size_t>(n), 0);
  p.coeffs()[p.index_of(zero)] = -offset;
  return VarietySystem({p}, n);
}

// Tangent space at a point of Z: orthogonal complement of span{grad P_i}.
inline Subspace tangent_space(const VarietySystem& Z, const Vec& z) {
  if (Z.max_abs_value(z) >= VarietySystem::kOnVarietyTol)
    throw NotOnVariety("max |P_i(z)| = " + std::to_string(Z.max_abs_value(z)));
  auto grads = Z.gradients(z);
  if (wedge_norm(grads) <= VarietySystem::kWedgeTol)
    throw DegeneratePoint("wedge of gradients below threshold");
  return Subspace::span_of(grads).complement();
}

// Uniform-cell point hash for nearest-distance queries against a sample cloud.
class PointHash {
 public:
  PointHash(std::vector<Vec> pts, double cell) : pts_(std::move(pts)), cell_(cell) {
    for (std::size_t i = 0; i < pts_.size(); ++i) cells_[key(pts_[i])].push_back(i);
  }

  bool empty() const { return pts_.empty(); }
  const std::vector<Vec>& points() const { return pts_; }

  // distance from x to the cloud, exact below ~cell, +inf when beyond 1 cell ring
  double distance_within_cell(const Vec& x) const {
    double best = 1e300;
    std::vector<long> k = key(x);
    std::vector<long> nb(k.size());
    std::function<void(std::size_t)> rec = [&](std::size_t a) {
      if (a == k.size()) {
        auto it = cells_.find(nb);
        if (it != cells_.end())
          for (auto i : it->second) best = std::min(best, dist(x, pts_[i]));
        return;
      }
      for (long d = -1; d <= 1; ++d) {
        nb[a] = k[a] + d;
        rec(a + 1);
      }
    };
    rec(0);
    return best;
  }

 private:
  std::vector<long> key(const Vec& x) const {
    std::vector<long> k(x.size());
    for (std::size_t a = 0; a < x.size(); ++a)
      k[a] = static_cast<long>(std::floor(x[a] / cell_));
    return k;
  }

  std::vector<Vec> pts_;
  double cell_;
  std::map<std::vector<long>, std::vector<std::size_t>> cells_;
};

struct TangencyParams {
  double R = 256.0;
  double delta_m = 0.3;
  double C_tan = 2.0;

  double dist_threshold() const { return std::pow(R, 0.5 + delta_m); }
  double angle_threshold() const { return std::pow(R, -0.5 + delta_m); }
};

struct TangencyReport {
  bool tangent = false;
  std::optional<Vec> witness;
  std::string which;  // "distance" or "angle"
};

// T is tangent to Z iff (a) every axis sample lies within C_tan R^{1/2+dm} of
// a sampled Z point and (b) every sampled z that close to the tube satisfies
// angle(G(theta), T_z Z) <= C_tan R^{-1/2+dm}.
inline TangencyReport is_tangent_tube(const Tube& t, const VarietySystem& Z,
                                      const TangencyParams& params, int axis_samples = 33,
                                      int z_target = 4000, std::uint64_t seed = 1) {
  TangencyReport rep;
  const double dthr = params.C_tan * params.dist_threshold();
  const double athr = params.C_tan * params.angle_threshold();

  // sample Z in the tube's inflated bounding box
  Vec lo(static_cast<std::size_t>(t.cap.ambient_dim()), 1e300),
      hi(static_cast<std::size_t>(t.cap.ambient_dim()), -1e300);
  for (int i = 0; i <= axis_samples; ++i) {
    const double xn = -t.ambient_R + 2.0 * t.ambient_R * i / axis_samples;
    Vec p = t.axis_point(xn);
    for (std::size_t a = 0; a < p.size(); ++a) {
      lo[a] = std::min(lo[a], p[a]);
      hi[a] = std::max(hi[a], p[a]);
    }
  }
  const double inflate = t.radius + 2.0 * dthr;
  for (std::size_t a = 0; a < lo.size(); ++a) {
    lo[a] -= inflate;
    hi[a] += inflate;
  }
  auto zs = Z.sample_box(lo, hi, z_target, seed);
  if (zs.empty()) throw SamplerFailure("no variety samples near the tube");
  PointHash hash(zs, dthr);

  Vec g = t.direction();
  // (a) containment of the axis in the neighborhood
  for (int i = 0; i <= axis_samples; ++i) {
    const double xn = -t.ambient_R + 2.0 * t.ambient_R * i / axis_samples;
    Vec p = t.axis_point(xn);
    if (norm(p) > t.ambient_R) continue;
    if (hash.distance_within_cell(p) > dthr) {
      rep.tangent = false;
      rep.witness = p;
      rep.which = "distance";
      return rep;
    }
  }
  // (b) angle condition at variety points near the tube
  for (const auto& z : zs) {
    // distance from z to the tube: min over axis samples, minus radius
    double dz = 1e300;
    for (int i = 0; i <= axis_samples; ++i) {
      const double xn = -t.ambient_R + 2.0 * t.ambient_R * i / axis_samples;
      dz = std::min(dz, dist(z, t.axis_point(xn)));
    }
    dz = std::max(0.0, dz - t.radius);
    if (dz > dthr) continue;
    Subspace tz = tangent_space(Z, z);
    if (angle_to_subspace(g, tz) > athr) {
      rep.tangent = false;
      rep.witness = z;
      rep.which = "angle";
      return rep;
    }
  }
  rep.tangent = true;
  return rep;
}

// Split of the packets meeting N(Y) within the ball B_j = B(center, rho) into
// Y-tangent and Y-transverse, per the smaller-ball tangency conditions.
struct PacketClassification {
  std::vector<std::size_t> in_ball;      // T_j
  std::vector<std::size_t> tangent;      // T_{j,tang}
  std::vector<std::size_t> transverse;   // T_{j,trans} = T_j \ T_{j,tang}
};

template <typename PacketSetT>
inline PacketClassification classify_packets(const PacketSetT& P, const VarietySystem& Y,
                                             const Vec& ball_center, double rho,
                                             double dist_thresh, double angle_thresh,
                                             double C_tan = 2.0, int axis_samples = 65,
                                             int z_target = 6000, std::uint64_t seed = 2) {
  PacketClassification out;
  // sample Y near 2B_j
  Vec lo = ball_center, hi = ball_center;
  for (auto& v : lo) v -= 2.0 * rho + dist_thresh;
  for (auto& v : hi) v += 2.0 * rho + dist_thresh;
  auto ys = Y.sample_box(lo, hi, z_target, seed);
  if (ys.empty()) throw SamplerFailure("no variety samples near the ball");
  PointHash hash(ys, C_tan * dist_thresh);

  for (std::size_t pi = 0; pi < P.packets.size(); ++pi) {
    const auto& p = P.packets[pi];
    Tube t = p.tube(P.R, P.delta);
    Vec g = t.direction();
    bool meets = false;       // tube meets N(Y) within B_j
    bool contained = true;    // tube cap 2B_j inside N(Y)
    for (int i = 0; i <= axis_samples; ++i) {
      const double xn = -t.ambient_R + 2.0 * t.ambient_R * i / axis_samples;
      Vec x = t.axis_point(xn);
      const double d_ball = dist(x, ball_center);
      if (d_ball > 2.0 * rho) continue;
      const double d_var = hash.distance_within_cell(x);
      if (d_ball <= rho && d_var <= dist_thresh) meets = true;
      if (d_var > C_tan * dist_thresh) contained = false;
    }
    if (!meets) continue;
    out.in_ball.push_back(pi);
    bool angle_ok = true;
    if (contained) {
      for (const auto& z : ys) {
        if (dist(z, ball_center) > 2.0 * rho) continue;
        double dz = 1e300;
        for (int i = 0; i <= axis_samples; ++i) {
          const double xn = -t.ambient_R + 2.0 * t.ambient_R * i / axis_samples;
          dz = std::min(dz, dist(z, t.axis_point(xn)));
        }
        if (std::max(0.0, dz - t.radius) > dist_thresh) continue;
        Subspace tz = tangent_space(Y, z);
        if (angle_to_subspace(g, tz) > C_tan * angle_thresh) {
          angle_ok = false;
          break;
        }
      }
    }
    if (contained && angle_ok) out.tangent.push_back(pi);
    else out.transverse.push_back(pi);
  }
  return out;
}

// Z_{>alpha} cap T covered greedily by balls of radius 4 r alpha^{-1}.
struct TransverseCover {
  std::vector<Vec> ball_centers;
  double ball_radius = 0.0;
  std::size_t sample_count = 0;
};

inline TransverseCover transverse_cover(const VarietySystem& Z, const Tube& t, double alpha,
                                        int z_target = 6000, std::uint64_t seed = 3) {
  if (!(alpha > 0.0 && alpha < 1.5707963267948966))
    throw std::domain_error("transverse_cover: alpha in (0, pi/2)");
  TransverseCover cover;
  cover.ball_radius = 4.0 * t.radius / alpha;

  Vec lo(static_cast<std::size_t>(t.cap.ambient_dim()), 1e300), hi = lo;
  for (auto& v : hi) v = -1e300;
  const int axis_samples = 65;
  for (int i = 0; i <= axis_samples; ++i) {
    Vec p = t.axis_point(-t.ambient_R + 2.0 * t.ambient_R * i / axis_samples);
    for (std::size_t a = 0; a < p.size(); ++a) {
      lo[a] = std::min(lo[a], p[a]);
      hi[a] = std::max(hi[a], p[a]);
    }
  }
  for (std::size_t a = 0; a < lo.size(); ++a) {
    lo[a] -= 2.0 * t.radius;
    hi[a] += 2.0 * t.radius;
  }
  auto zs = Z.sample_box(lo, hi, z_target, seed);
  Vec axis_dir = t.direction();
  std::vector<Vec> selected;
  for (const auto& z : zs) {
    // inside the cylinder: distance to the axis line <= radius
    if (distance_to_axis(t, z) > t.radius) continue;
    Subspace tz = tangent_space(Z, z);
    // angle(T_z Z, axis): smallest angle between the axis direction and the
    // tangent space
    if (angle_to_subspace(axis_dir, tz) > alpha) selected.push_back(z);
  }
  cover.sample_count = selected.size();
  for (const auto& z : selected) {
    bool covered = false;
    for (const auto& c : cover.ball_centers)
      if (dist(z, c) <= cover.ball_radius) {
        covered = true;
        break;
      }
    if (!covered) cover.ball_centers.push_back(z);
  }
  return cover;
}

// Theta(Z): caps theta admitting some v with the tube axis inside the
// R^{1/2+delta}-neighborhood of sampled Z.
struct ThetaCount {
  int count = 0;
  std::vector<Vec> caps;  // counted cap centers
};

inline ThetaCount theta_count(const VarietySystem& Z, double R, double delta,
                              int z_target = 30000, std::uint64_t seed = 4,
                              std::size_t lattice_budget = 2000000) {
  const int n = Z.n;
  const int d = n - 1;
  const double thr = std::pow(R, 0.5 + delta);
  Vec lo(static_cast<std::size_t>(n), -R), hi(static_cast<std::size_t>(n), R);
  auto zs = Z.sample_box(lo, hi, z_target, seed);
  if (zs.empty()) return {};
  PointHash hash(zs, thr);

  const double cap_spacing = 1.0 / std::sqrt(R);
  const double vstep = std::sqrt(R);
  const int vmax = static_cast<int>(std::floor((2.0 * R) / vstep));
  const int cmax = static_cast<int>(std::floor(1.0 / cap_spacing));
  const int axis_samples = 17;

  ThetaCount out;
  std::vector<int> ci(static_cast<std::size_t>(d), -cmax);
  std::size_t lattice_checked = 0;
  for (;;) {
    Vec center(static_cast<std::size_t>(d));
    double cn = 0.0;
    for (int a = 0; a < d; ++a) {
      center[static_cast<std::size_t>(a)] = ci[static_cast<std::size_t>(a)] * cap_spacing;
      cn += center[static_cast<std::size_t>(a)] * center[static_cast<std::size_t>(a)];
    }
    if (std::sqrt(cn) <= 1.0) {
      Cap cap(center, cap_spacing, ScaleTag::fine);
      bool found = false;
      std::vector<int> vi(static_cast<std::size_t>(d), -vmax);
      for (;;) {
        Vec v(static_cast<std::size_t>(d));
        for (int a = 0; a < d; ++a) v[static_cast<std::size_t>(a)] = vi[static_cast<std::size_t>(a)] * vstep;
        // midpoint prune: the axis midpoint must lie near N(Z)
        Vec mid(static_cast<std::size_t>(n), 0.0);
        for (int a = 0; a < d; ++a) mid[static_cast<std::size_t>(a)] = -v[static_cast<std::size_t>(a)];
        if (hash.distance_within_cell(mid) <= 2.0 * thr) {
          if (++lattice_checked > lattice_budget)
            throw SearchBudgetExceeded("theta_count lattice budget after midpoint restriction");
          Tube t(cap, v, R, delta);
          bool ok = true;
          for (int i = 0; i <= axis_samples; ++i) {
            const double xn = -R + 2.0 * R * i / axis_samples;
            Vec x = t.axis_point(xn);
            if (hash.distance_within_cell(x) > thr) {
              ok = false;
              break;
            }
          }
          if (ok) {
            found = true;
            break;
          }
        }
        int a = d - 1;
        for (; a >= 0; --a) {
          if (++vi[static_cast<std::size_t>(a)] <= vmax) break;
          vi[static_cast<std::size_t>(a)] = -vmax;
        }
        if (a < 0) break;
      }
      if (found) {
        out.count += 1;
        out.caps.push_back(center);
      }
    }
    int a = d - 1;
    for (; a >= 0; --a) {
      if (++ci[static_cast<std::size_t>(a)] <= cmax) break;
      ci[static_cast<std::size_t>(a)] = -cmax;
    }
    if (a < 0) break;
  }
  return out;
}

// Generic-slice check: draw a seeded random simple m-vector w = w_1 ^ ... ^ w_m
// and verify that Z_w = Z(P_1, ..., P_{n-m}, g_w) with
// g_w = grad P_1 ^ ... ^ grad P_{n-m} ^ w is a transverse complete
// intersection on its sampled points; resamples w on failure.
struct SardSliceResult {
  bool ok = false;
  int resamples = 0;
  std::size_t zero_samples = 0;
  double min_wedge = 0.0;
};

inline SardSliceResult sard_slice_check(const VarietySystem& Z, const Vec& box_lo, const Vec& box_hi,
                                        std::uint64_t seed = 7, int max_resamples = 5) {
  SardSliceResult res;
  const int n = Z.n;
  const std::size_t k = Z.polys.size();
  Rng root(seed);
  auto det_with = [&](const Vec& x, const std::vector<Vec>& w) {
    // determinant of the n x n matrix [grad P_1; ...; grad P_k; w_1; ...; w_m]
    std::vector<double> A;
    auto grads = Z.gradients(x);
    for (const auto& g : grads) A.insert(A.end(), g.begin(), g.end());
    for (const auto& wv : w) A.insert(A.end(), wv.begin(), wv.end());
    double det = 1.0;
    for (int c = 0; c < n; ++c) {
      int piv = c;
      for (int r = c + 1; r < n; ++r)
        if (std::fabs(A[static_cast<std::size_t>(r) * n + c]) >
            std::fabs(A[static_cast<std::size_t>(piv) * n + c]))
          piv = r;
      if (std::fabs(A[static_cast<std::size_t>(piv) * n + c]) < 1e-300) return 0.0;
      if (piv != c) {
        for (int cc = 0; cc < n; ++cc)
          std::swap(A[static_cast<std::size_t>(c) * n + cc], A[static_cast<std::size_t>(piv) * n + cc]);
        det = -det;
      }
      det *= A[static_cast<std::size_t>(c) * n + c];
      for (int r = c + 1; r < n; ++r) {
        const double f = A[static_cast<std::size_t>(r) * n + c] / A[static_cast<std::size_t>(c) * n + c];
        for (int cc = c; cc < n; ++cc)
          A[static_cast<std::size_t>(r) * n + cc] -= f * A[static_cast<std::size_t>(c) * n + cc];
      }
    }
    return det;
  };

  for (int attempt = 0; attempt < max_resamples; ++attempt) {
    Rng rng = root.derive(attempt);
    std::vector<Vec> w;
    for (int i = 0; i < Z.m; ++i) w.push_back(normalized(rng.gaussian_vector(n)));

    // sample Z, find near-zeros of g_w along Z, and check the extended wedge
    auto zs = Z.sample_box(box_lo, box_hi, 4000, rng.next_u64());
    if (zs.empty()) {
      res.ok = true;  // empty zero set: nothing to violate
      res.resamples = attempt;
      return res;
    }
    double gw_scale = 0.0;
    for (const auto& z : zs) gw_scale = std::max(gw_scale, std::fabs(det_with(z, w)));
    res.zero_samples = 0;
    res.min_wedge = 1e300;
    bool good = true;
    for (const auto& z : zs) {
      if (std::fabs(det_with(z, w)) > 1e-3 * gw_scale) continue;
      ++res.zero_samples;
      // numerical gradient of g_w
      Vec gw_grad(static_cast<std::size_t>(n));
      const double h = 1e-5 * std::max(1.0, norm(z));
      for (int a = 0; a < n; ++a) {
        Vec zp = z, zm = z;
        zp[static_cast<std::size_t>(a)] += h;
        zm[static_cast<std::size_t>(a)] -= h;
        gw_grad[static_cast<std::size_t>(a)] = (det_with(zp, w) - det_with(zm, w)) / (2.0 * h);
      }
      auto grads = Z.gradients(z);
      grads.push_back(gw_grad);
      const double wn = wedge_norm(grads);
      res.min_wedge = std::min(res.min_wedge, wn);
      if (wn <= VarietySystem::kWedgeTol) {
        good = false;
        break;
      }
    }
    if (good) {
      res.ok = true;
      res.resamples = attempt;
      return res;
    }
  }
  res.ok = false;
  res.resamples = max_resamples;
  return res;
}

// Uncertainty-principle concentration check: random band-limited G on a torus,
// worst-case ball mass fraction against the (rho r)^dim bound.
inline double concentration_check(double r, double rho, int trials, int dim,
                                  std::uint64_t seed = 5) {
  if (!(rho <= 1.0 / r)) throw std::domain_error("concentration_check: need rho <= 1/r");
  const double T = 24.0 / r;  // torus period
  const double dxi = 2.0 * 3.141592653589793238462643383279 / T;
  const int kmax = static_cast<int>(std::floor(r / dxi));
  const double hx = 0.25 / r;  // band-limited to |xi| <= r
  const int nx = static_cast<int>(std::floor(T / hx));

  double worst = 0.0;
  Rng root(seed);
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng = root.derive(trial);
    if (dim == 1) {
      std::vector<cplx> coef;
      std::vector<double> xi;
      for (int k = -kmax; k <= kmax; ++k) {
        if (std::fabs(k * dxi) > r) continue;
        coef.push_back(cplx(rng.gaussian(), rng.gaussian()));
        xi.push_back(k * dxi);
      }
      std::vector<double> g2(static_cast<std::size_t>(nx));
      double total = 0.0;
      for (int i = 0; i < nx; ++i) {
        const double x = i * hx;
        cplx s(0.0, 0.0);
        for (std::size_t k = 0; k < coef.size(); ++k)
          s += coef[k] * cplx(std::cos(xi[k] * x), std::sin(xi[k] * x));
        g2[static_cast<std::size_t>(i)] = std::norm(s);
        total += std::norm(s);
      }
      // sliding window of width 2 rho (wrapped)
      const int w = std::max(1, static_cast<int>(std::floor(2.0 * rho / hx)));
      double window = 0.0;
      for (int i = 0; i < w; ++i) window += g2[static_cast<std::size_t>(i % nx)];
      double maxwin = window;
      for (int i = 0; i < nx; ++i) {
        window += g2[static_cast<std::size_t>((i + w) % nx)] - g2[static_cast<std::size_t>(i % nx)];
        maxwin = std::max(maxwin, window);
      }
      const double ratio = (maxwin / total) / std::pow(rho * r, dim);
      worst = std::max(worst, ratio);
    } else if (dim == 2) {
      std::vector<cplx> coef;
      std::vector<std::pair<double, double>> xi;
      for (int k1 = -kmax; k1 <= kmax; ++k1)
        for (int k2 = -kmax; k2 <= kmax; ++k2) {
          const double x1 = k1 * dxi, x2 = k2 * dxi;
          if (std::hypot(x1, x2) > r) continue;
          coef.push_back(cplx(rng.gaussian(), rng.gaussian()));
          xi.emplace_back(x1, x2);
        }
      const int nl = std::min(nx, 192);
      const double hl = T / nl;
      std::vector<double> g2(static_cast<std::size_t>(nl) * nl);
      double total = 0.0;
      for (int i = 0; i < nl; ++i)
        for (int j = 0; j < nl; ++j) {
          const double x = i * hl, y = j * hl;
          cplx s(0.0, 0.0);
          for (std::size_t k = 0; k < coef.size(); ++k) {
            const double ph = xi[k].first * x + xi[k].second * y;
            s += coef[k] * cplx(std::cos(ph), std::sin(ph));
          }
          g2[static_cast<std::size_t>(i) * nl + j] = std::norm(s);
          total += std::norm(s);
        }
      // worst ball of radius rho on a center grid
      const int w = std::max(1, static_cast<int>(std::ceil(rho / hl)));
      double maxwin = 0.0;
      for (int ic = 0; ic < nl; ic += 2)
        for (int jc = 0; jc < nl; jc += 2) {
          double s = 0.0;
          for (int di = -w; di <= w; ++di)
            for (int dj = -w; dj <= w; ++dj) {
              if (std::hypot(di * hl, dj * hl) > rho) continue;
              const int ii = ((ic + di) % nl + nl) % nl;
              const int jj = ((jc + dj) % nl + nl) % nl;
              s += g2[static_cast<std::size_t>(ii) * nl + jj];
            }
          maxwin = std::max(maxwin, s);
        }
      const double ratio = (maxwin / total) / std::pow(rho * r, dim);
      worst = std::max(worst, ratio);
    } else {
      throw std::domain_error("concentration_check: dim must be 1 or 2");
    }
  }
  return worst;
}

// Transverse equidistribution: mass of |Eg|^2 in B cap N_{rho^{1/2+dm}}(Z)
// against (rho/R)^{(n-m)/2} times the mass in 2B.
struct EquidistributionReport {
  double mass_neighborhood = 0.0;
  double mass_2B = 0.0;
  double fraction = 0.0;          // mass_neighborhood / mass_2B
  double normalized_ratio = 0.0;  // fraction / (rho/R)^{(n-m)/2}
};

inline EquidistributionReport transverse_equidistribution_check(
    const DensityFunction& g, double R, const VarietySystem& Z, const Vec& ball_center,
    double delta_m, double rho, std::uint64_t seed = 6, double c_quad = kDefaultCQuad) {
  if (g.l2_norm() == 0.0) throw EmptyPacketSet("g vanishes");
  if (g.n() != 2) throw std::domain_error("transverse_equidistribution_check: n = 2 sampling only");
  const double Brad = std::pow(R, 0.5 + delta_m);
  const double width = std::pow(rho, 0.5 + delta_m);

  // sample Z around the ball for the neighborhood test
  Vec lo = ball_center, hi = ball_center;
  for (auto& v : lo) v -= 2.5 * Brad;
  for (auto& v : hi) v += 2.5 * Brad;
  auto zs = Z.sample_box(lo, hi, 20000, seed);
  if (zs.empty()) throw SamplerFailure("no variety samples near B");
  PointHash hash(zs, std::max(width, Brad / 16.0));

  EquidistributionReport rep;
  const int half = static_cast<int>(std::ceil(2.0 * Brad));
  AxisGrid xg{ball_center[0] - half + 0.5, 1.0, 2 * half};
  for (int row = 0; row < 2 * half; ++row) {
    const double xn = ball_center[1] - half + row + 0.5;
    auto vals = evaluate_extension_row(g, xg, xn, c_quad);
    for (int i = 0; i < xg.count; ++i) {
      Vec x = {xg.point(i), xn};
      const double db = dist(x, ball_center);
      if (db > 2.0 * Brad) continue;
      const double m = std::norm(vals[static_cast<std::size_t>(i)]);
      rep.mass_2B += m;
      if (db <= Brad && hash.distance_within_cell(x) <= width) rep.mass_neighborhood += m;
    }
  }
  rep.fraction = rep.mass_2B > 0.0 ? rep.mass_neighborhood / rep.mass_2B : 0.0;
  const double expected = std::pow(rho / R, 0.5 * (Z.n - Z.m));
  rep.normalized_ratio = rep.fraction / expected;
  return rep;
}

}  // namespace rlab
