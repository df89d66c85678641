#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "rlab/broad_norm.hpp"
#include "rlab/errors.hpp"
#include "rlab/exponents.hpp"
#include "rlab/geometry.hpp"
#include "rlab/grid.hpp"
#include "rlab/polynomial.hpp"
#include "rlab/rng.hpp"
#include "rlab/variety.hpp"
#include "rlab/wave_packets.hpp"

namespace rlab {

// Extremal slab example: wave packets with random signs concentrated in the
// R^{1/2}-neighborhood of a k-plane, distributed evenly so |Ef| is roughly
// constant on the slab.  The k-plane is span(e_1, ..., e_{k-1}, e_n), the
// directions G(omega) with omega in span(e_1, ..., e_{k-1}).

struct SlabPacket {
  Vec omega;  // cap center
  Vec v;      // lattice point
  int sign = 1;
};

struct SlabExample {
  int n = 2;
  int k = 2;
  double R = 0.0;
  double delta = kDefaultPacketDelta;
  std::uint64_t seed = 0;
  Subspace plane;
  std::vector<SlabPacket> packets;
  DensityFunction density;  // normalized so ||f||_2 = 1
  double slab_width = 0.0;  // C R^{1/2+delta}
};

inline SlabExample build_slab_example(int n, int k, double R, std::uint64_t seed,
                                      double delta = kDefaultPacketDelta,
                                      double resolution_c_quad = kDefaultCQuad) {
  if (k < 2 || k > n) throw std::domain_error("build_slab_example: need 2 <= k <= n");
  if (n > 3) throw ScaleInfeasible("build_slab_example: field synthesis supported for n <= 3");
  const int d = n - 1;
  const double r0 = 1.0 / std::sqrt(R);
  const double cap_spacing = r0;
  const double L = std::pow(R, (1.0 + delta) / 2.0);
  const double W = std::pow(R, 0.5 + delta);

  SlabExample ex;
  ex.n = n;
  ex.k = k;
  ex.R = R;
  ex.delta = delta;
  ex.seed = seed;
  ex.slab_width = 2.0 * W;
  {
    std::vector<Vec> span;
    for (int a = 0; a < k - 1; ++a) {
      Vec e(static_cast<std::size_t>(n), 0.0);
      e[static_cast<std::size_t>(a)] = 1.0;
      span.push_back(std::move(e));
    }
    Vec en(static_cast<std::size_t>(n), 0.0);
    en[static_cast<std::size_t>(n - 1)] = 1.0;
    span.push_back(std::move(en));
    ex.plane = Subspace::span_of(span);
  }

  // caps with G(theta) within O(R^{-1/2}) of the plane: centers with the
  // omega-components transverse to span(e_1..e_{k-1}) below ~2 R^{-1/2}
  Rng rng = Rng(seed).derive("slab");
  const int cmax = static_cast<int>(std::floor(1.0 / cap_spacing));
  const int vmax = static_cast<int>(std::floor(3.0 * R / L));
  std::vector<int> ci(static_cast<std::size_t>(d), -cmax);
  for (;;) {
    Vec omega(static_cast<std::size_t>(d));
    double on2 = 0.0, perp = 0.0;
    for (int a = 0; a < d; ++a) {
      omega[static_cast<std::size_t>(a)] = ci[static_cast<std::size_t>(a)] * cap_spacing;
      on2 += omega[static_cast<std::size_t>(a)] * omega[static_cast<std::size_t>(a)];
      if (a >= k - 1) perp = std::max(perp, std::fabs(omega[static_cast<std::size_t>(a)]));
    }
    if (std::sqrt(on2) <= 0.85 && perp <= 2.0 * r0 + 1e-12) {
      // v-lattice: tubes meeting B_R whose transverse drift stays inside the slab
      std::vector<int> vi(static_cast<std::size_t>(d), -vmax);
      for (;;) {
        Vec v(static_cast<std::size_t>(d));
        for (int a = 0; a < d; ++a) v[static_cast<std::size_t>(a)] = vi[static_cast<std::size_t>(a)] * L;
        // transverse components of the axis at both ends
        bool in_slab = true;
        for (int a = k - 1; a < d; ++a) {
          const double drift = 2.0 * R * std::fabs(omega[static_cast<std::size_t>(a)]);
          if (std::fabs(v[static_cast<std::size_t>(a)]) + drift > 2.0 * W) in_slab = false;
        }
        // the axis must meet B_R
        bool meets = false;
        for (int i = 0; i <= 16 && in_slab; ++i) {
          const double xn = -R + 2.0 * R * i / 16.0;
          double s = xn * xn;
          for (int a = 0; a < d; ++a) {
            const double c = -v[static_cast<std::size_t>(a)] -
                             2.0 * xn * omega[static_cast<std::size_t>(a)];
            s += c * c;
          }
          if (std::sqrt(s) <= R) meets = true;
        }
        if (in_slab && meets)
          ex.packets.push_back({omega, v, rng.sign()});
        int a = d - 1;
        for (; a >= 0; --a) {
          if (++vi[static_cast<std::size_t>(a)] <= vmax) break;
          vi[static_cast<std::size_t>(a)] = -vmax;
        }
        if (a < 0) break;
      }
    }
    int a = d - 1;
    for (; a >= 0; --a) {
      if (++ci[static_cast<std::size_t>(a)] <= cmax) break;
      ci[static_cast<std::size_t>(a)] = -cmax;
    }
    if (a < 0) break;
  }
  if (ex.packets.empty()) throw ScaleInfeasible("build_slab_example: no packets at this scale");

  // assemble f = sum of constant-amplitude signed atoms
  const int count = 2 * static_cast<int>(std::ceil(R / resolution_c_quad)) + 1;
  std::vector<AxisGrid> axes(static_cast<std::size_t>(d), symmetric_axis(1.0, count));
  DensityFunction f(n, axes);
  const double hw = 0.8 * r0;  // atom support half-width per axis
  for (const auto& pk : ex.packets) {
    // accumulate the atom on its support window
    std::vector<int> j0(static_cast<std::size_t>(d)), j1(static_cast<std::size_t>(d));
    for (int a = 0; a < d; ++a) {
      const auto& ax = axes[static_cast<std::size_t>(a)];
      j0[static_cast<std::size_t>(a)] = std::max(
          0, static_cast<int>(std::ceil((pk.omega[static_cast<std::size_t>(a)] - hw - ax.lo) / ax.h)));
      j1[static_cast<std::size_t>(a)] = std::min(
          ax.count - 1,
          static_cast<int>(std::floor((pk.omega[static_cast<std::size_t>(a)] + hw - ax.lo) / ax.h)));
    }
    std::vector<int> ji = j0;
    for (;;) {
      double b = 1.0, phase = 0.0;
      std::size_t flat = 0;
      for (int a = 0; a < d; ++a) {
        const auto& ax = axes[static_cast<std::size_t>(a)];
        const double w = ax.point(ji[static_cast<std::size_t>(a)]);
        b *= cutoff::bump((w - pk.omega[static_cast<std::size_t>(a)]) / hw);
        phase += pk.v[static_cast<std::size_t>(a)] * w;
        flat = flat * static_cast<std::size_t>(ax.count) +
               static_cast<std::size_t>(ji[static_cast<std::size_t>(a)]);
      }
      if (b != 0.0)
        f.at(flat) += static_cast<double>(pk.sign) * b * cplx(std::cos(phase), std::sin(phase));
      int a = d - 1;
      for (; a >= 0; --a) {
        if (++ji[static_cast<std::size_t>(a)] <= j1[static_cast<std::size_t>(a)]) break;
        ji[static_cast<std::size_t>(a)] = j0[static_cast<std::size_t>(a)];
      }
      if (a < 0) break;
    }
  }
  const double l2 = f.l2_norm();
  if (l2 == 0.0) throw ScaleInfeasible("build_slab_example: zero density");
  f *= cplx(1.0 / l2, 0.0);
  ex.density = std::move(f);
  return ex;
}

// Least-squares scaling fit of log(ratio) against log(R).
struct ScalingRun {
  std::vector<double> R_values;
  std::vector<double> ratios;
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // max |log ratio - fit|

  void fit() {
    if (R_values.size() < 3) throw std::domain_error("ScalingRun: need >= 3 R values");
    double rmin = 1e300, rmax = 0.0;
    for (double R : R_values) {
      rmin = std::min(rmin, R);
      rmax = std::max(rmax, R);
    }
    if (rmax / rmin < 8.0) throw std::domain_error("ScalingRun: R span must cover a factor of 8");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const std::size_t m = R_values.size();
    for (std::size_t i = 0; i < m; ++i) {
      const double x = std::log(R_values[i]);
      const double y = std::log(ratios[i]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double det = m * sxx - sx * sx;
    slope = (m * sxy - sx * sy) / det;
    intercept = (sy * sxx - sx * sxy) / det;
    residual = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double x = std::log(R_values[i]);
      const double y = std::log(ratios[i]);
      residual = std::max(residual, std::fabs(y - (slope * x + intercept)));
    }
  }
};

// ||Ef||_{BL^p_{k,A}(B_R)} / ||f||_2 for the slab example across an R list.
// The per-R ratio is the geometric mean over `signs_per_R` independent sign
// draws, which damps the Khintchine fluctuation of a single draw.
inline ScalingRun scaling_experiment(int n, int k, const std::vector<double>& R_list, double p,
                                     double K, int A, std::uint64_t seed,
                                     double delta = kDefaultPacketDelta, int signs_per_R = 3) {
  ScalingRun run;
  for (double R : R_list) {
    double log_sum = 0.0;
    for (int s = 0; s < signs_per_R; ++s) {
      auto ex = build_slab_example(
          n, k, R, Rng(seed).derive(static_cast<std::uint64_t>(R)).derive(s).next_u64(), delta);
      BroadParams params{k, A, K, p};
      auto bundle = make_bundle(ex.density, R, params, {p});
      std::vector<Subspace> cands;
      if (A > 0) cands = candidate_subspaces(bundle.caps, n, k);
      log_sum += std::log(bl_norm_from_bundle(bundle, params, cands));  // ||f||_2 = 1
    }
    run.R_values.push_back(R);
    run.ratios.push_back(std::exp(log_sum / signs_per_R));
  }
  run.fit();
  return run;
}

// --- quadric example geometry (n = 4) ---------------------------------------

// Q(x) = (x1/R)^2 + (x2/R)^2 - (x3/R)^2 - (x4/R)^2 - 1.
inline PolynomialND quadric_polynomial(double R) {
  PolynomialND q(4, 2);
  for (int a = 0; a < 4; ++a) {
    std::vector<int> e(4, 0);
    e[static_cast<std::size_t>(a)] = 2;
    q.coeffs()[q.index_of(e)] = (a < 2 ? 1.0 : -1.0) / (R * R);
  }
  q.coeffs()[q.index_of({0, 0, 0, 0})] = -1.0;
  return q;
}

struct QuadricLine {
  Vec point;
  Vec direction;  // unit
};

// The 1-parameter family of lines in the quadric through z: directions d with
// B(z, d) = 0 and B(d, d) = 0 for the bilinear form B = diag(1,1,-1,-1)/R^2.
inline std::vector<QuadricLine> quadric_line_family(double R, const Vec& z, int count = 64) {
  if (z.size() != 4) throw std::domain_error("quadric_line_family: z must be in R^4");
  auto Q = quadric_polynomial(R);
  if (std::fabs(Q.eval(z)) > 1e-9)
    throw NotOnQuadric("Q(z) = " + std::to_string(Q.eval(z)));

  auto Bdot = [&](const Vec& a, const Vec& b) {
    return (a[0] * b[0] + a[1] * b[1] - a[2] * b[2] - a[3] * b[3]) / (R * R);
  };
  // w = B z (Euclidean normal of the constraint B(z, d) = 0)
  Vec w = {z[0] / (R * R), z[1] / (R * R), -z[2] / (R * R), -z[3] / (R * R)};
  Subspace ortho = Subspace::span_of({w}).complement();  // 3-dim

  // restricted form M_{ij} = B(u_i, u_j), diagonalized by Jacobi
  const auto& u = ortho.basis;
  std::vector<double> M(9);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) M[static_cast<std::size_t>(i) * 3 + j] = Bdot(u[static_cast<std::size_t>(i)], u[static_cast<std::size_t>(j)]);
  std::vector<double> vecs;
  auto eig = symmetric_eigenvalues(M, 3, &vecs);
  // eigenvector columns combine the basis: e_i = sum_j vecs[j*3+i] u_j
  std::vector<Vec> axes(3, Vec(4, 0.0));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      axes[static_cast<std::size_t>(i)] =
          axpy(vecs[static_cast<std::size_t>(j) * 3 + i], u[static_cast<std::size_t>(j)],
               std::move(axes[static_cast<std::size_t>(i)]));

  std::vector<int> pos, neg;
  for (int i = 0; i < 3; ++i) {
    if (eig[static_cast<std::size_t>(i)] > 1e-14) pos.push_back(i);
    else if (eig[static_cast<std::size_t>(i)] < -1e-14) neg.push_back(i);
  }
  if (pos.empty() || neg.empty())
    throw NotOnQuadric("restricted form is definite; no lines through z");

  std::vector<QuadricLine> out;
  const int lone = pos.size() == 1 ? pos[0] : neg[0];
  const int c1 = pos.size() == 1 ? neg[0] : pos[0];
  const int c2 = pos.size() == 1 ? neg[1] : pos[1];
  const double s0 = 1.0 / std::sqrt(std::fabs(eig[static_cast<std::size_t>(lone)]));
  const double s1 = 1.0 / std::sqrt(std::fabs(eig[static_cast<std::size_t>(c1)]));
  const double s2 = 1.0 / std::sqrt(std::fabs(eig[static_cast<std::size_t>(c2)]));
  for (int i = 0; i < count; ++i) {
    const double phi = 2.0 * 3.141592653589793238462643383279 * i / count;
    Vec dvec(4, 0.0);
    dvec = axpy(s0, axes[static_cast<std::size_t>(lone)], std::move(dvec));
    dvec = axpy(s1 * std::cos(phi), axes[static_cast<std::size_t>(c1)], std::move(dvec));
    dvec = axpy(s2 * std::sin(phi), axes[static_cast<std::size_t>(c2)], std::move(dvec));
    out.push_back({z, normalized(dvec)});
  }
  return out;
}

// Broadness probe: fraction of the cone directions through a point that lie
// within angle 1/K of any candidate 2-plane spanned by a pair of directions.
struct BroadnessProbe {
  double max_fraction = 0.0;
  std::size_t planes_checked = 0;
};

inline BroadnessProbe direction_broadness(const std::vector<Vec>& directions, double K,
                                          int plane_subsample = 4) {
  BroadnessProbe probe;
  const std::size_t m = directions.size();
  for (std::size_t i = 0; i < m; i += plane_subsample)
    for (std::size_t j = i + 1; j < m; j += plane_subsample) {
      Subspace plane = [&]() -> Subspace {
        try {
          return Subspace::span_of({directions[i], directions[j]});
        } catch (const std::domain_error&) {
          return Subspace::span_of({directions[i]});
        }
      }();
      if (plane.dim() != 2) continue;
      ++probe.planes_checked;
      int close = 0;
      for (const auto& dvec : directions)
        if (angle_to_subspace(dvec, plane) <= 1.0 / K) ++close;
      probe.max_fraction =
          std::max(probe.max_fraction, static_cast<double>(close) / static_cast<double>(m));
    }
  return probe;
}

inline BroadnessProbe quadric_broadness_probe(double R, int sample_points, double K,
                                              std::uint64_t seed = 9, int directions_per_point = 64) {
  VarietySystem Z({quadric_polynomial(R)}, 4);
  Vec lo(4, -1.5 * R), hi(4, 1.5 * R);
  auto zs = Z.sample_box(lo, hi, sample_points, seed);
  if (zs.empty()) throw SamplerFailure("no quadric samples");
  BroadnessProbe worst;
  for (const auto& z : zs) {
    auto lines = quadric_line_family(R, z, directions_per_point);
    std::vector<Vec> dirs;
    for (const auto& l : lines) dirs.push_back(l.direction);
    auto probe = direction_broadness(dirs, K);
    worst.max_fraction = std::max(worst.max_fraction, probe.max_fraction);
    worst.planes_checked += probe.planes_checked;
  }
  return worst;
}

}  // namespace rlab
