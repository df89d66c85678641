#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rlab/errors.hpp"
#include "rlab/extension.hpp"
#include "rlab/fft.hpp"
#include "rlab/grid.hpp"

namespace rlab {

// Wave packet decomposition f = sum_{theta,v} f_{theta,v} with
//   f_{theta,v} = psi~_theta [ eta_v^vee * (psi_theta f) ].
// psi_theta is a smooth partition of unity over caps of radius R^{-1/2}
// (tensor product per axis, 50% support overlap); eta_v is a smooth partition
// of unity over dual-lattice balls of radius R^{(1+delta)/2}, applied as a
// Fourier multiplier on the omega-grid ring; psi~_theta equals 1 on a
// 0.1 R^{-1/2} neighborhood of supp psi_theta and is supported in theta.

enum class PartitionProfile {
  bump,  // overlapping bumps b((.)/hw), normalized to sum to 1
  step,  // smoothed cell indicators: complementary steps at cell boundaries
};

struct CutoffConfig {
  // Cap radius carries the covering's implicit constant: theta has radius
  // cap_radius_factor * R^{-1/2} while cap centers sit on the
  // psi_spacing_factor * R^{-1/2} grid.  The margin between supp psi and the
  // cap boundary is what psi~ uses for its taper; at desk scales the taper
  // must be wide or the packet's spectral tail swamps the tube.
  double cap_radius_factor = 3.5;
  PartitionProfile psi_profile = PartitionProfile::step;
  double psi_spacing_factor = 1.0;    // cap spacing, in units of R^{-1/2}
  double psi_transition_factor = 1.0; // step transition width, fraction of spacing
  PartitionProfile eta_profile = PartitionProfile::step;
  double eta_transition_factor = 0.9; // step transition width, fraction of lattice spacing
  double keep_tol = 1e-6;             // keep packets with l2 >= keep_tol * ||f||_2
  double membership_constant = 2.0;   // constant in the smaller-ball membership conditions

  // supp psi half-width, in units of R^{-1/2}
  double psi_support() const {
    if (psi_profile == PartitionProfile::bump) return psi_spacing_factor;
    return 0.5 * psi_spacing_factor * (1.0 + psi_transition_factor);
  }
  // psi~ plateau radius (covers supp psi plus a 0.1 R^{-1/2} margin), as a
  // fraction of the cap radius
  double plateau_factor() const { return (psi_support() + 0.1) / cap_radius_factor; }
};

// Default tube thickness exponent.  The paper takes delta asymptotically
// small; at desk scale the tube radius R^{1/2+delta} must clear the
// uncertainty width of a cap-supported packet (about pi R^{1/2}), which
// forces R^delta >= pi; 0.3 leaves tail headroom at R = 256.
inline constexpr double kDefaultPacketDelta = 0.3;

namespace cutoff {

inline double bump(double t) {
  const double t2 = t * t;
  if (t2 >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - t2));
}

// Complementary smooth step: 1 for s <= -1/2, 0 for s >= 1/2, F(s)+F(-s)=1.
inline double comp_step(double s) {
  if (s <= -0.5) return 1.0;
  if (s >= 0.5) return 0.0;
  const double a = 0.5 - s, b = 0.5 + s;
  const double ea = std::exp(-1.0 / a), eb = std::exp(-1.0 / b);
  return ea / (ea + eb);
}

// 1 for |t| <= a, 0 for |t| >= 1, smooth bump-ratio transition between.
inline double plateau(double t, double a) {
  const double u = std::fabs(t);
  if (u <= a) return 1.0;
  if (u >= 1.0) return 0.0;
  const double s = (u - a) / (1.0 - a);
  const double x = 1.0 - s;
  const double ex = std::exp(-1.0 / x), es = std::exp(-1.0 / s);
  return ex / (ex + es);
}

// Smoothed indicator of a cell of width `spacing` centered at 0, with a
// radial step of transition width T at the half-cell boundary.  Adjacent
// copies on the lattice sum to exactly 1.
inline double cell_step(double x, double spacing, double T) {
  return comp_step((std::fabs(x) - 0.5 * spacing) / T);
}

}  // namespace cutoff

namespace wp_detail {

// Per-axis cap partition sampled on one grid axis.
struct AxisCaps {
  double spacing = 0.0;
  double cap_radius = 0.0;
  int kmin = 0, kmax = 0;
  // per cap: first sample index and psi / psi~ values on the support window
  std::vector<int> start;
  std::vector<std::vector<double>> psi;
  std::vector<std::vector<double>> psi_tilde;

  double center(int k) const { return spacing * (k + kmin); }  // k is a 0-based slot
  int count() const { return kmax - kmin + 1; }
};

// nominal_radius is R^{-1/2}; the stored cap radius includes the covering
// constant cap_radius_factor.
inline AxisCaps build_axis_caps(const AxisGrid& ax, double nominal_radius, const CutoffConfig& cfg) {
  AxisCaps caps;
  caps.cap_radius = cfg.cap_radius_factor * nominal_radius;
  caps.spacing = cfg.psi_spacing_factor * nominal_radius;
  const bool step = cfg.psi_profile == PartitionProfile::step;
  // psi support half-width
  const double hw = cfg.psi_support() * nominal_radius;
  const double T = cfg.psi_transition_factor * caps.spacing;
  caps.kmin = static_cast<int>(std::floor((ax.lo - hw) / caps.spacing));
  caps.kmax = static_cast<int>(std::ceil((ax.hi() + hw) / caps.spacing));
  const int ncaps = caps.kmax - caps.kmin + 1;

  std::vector<double> denom(static_cast<std::size_t>(ax.count), 0.0);
  std::vector<std::vector<double>> raw(static_cast<std::size_t>(ncaps));
  caps.start.assign(static_cast<std::size_t>(ncaps), 0);
  for (int slot = 0; slot < ncaps; ++slot) {
    const double c = caps.spacing * (slot + caps.kmin);
    // the sample window spans the full cap (psi~'s support)
    int j0 = std::max(0, static_cast<int>(std::ceil((c - caps.cap_radius - ax.lo) / ax.h)));
    int j1 = std::min(ax.count - 1,
                      static_cast<int>(std::floor((c + caps.cap_radius - ax.lo) / ax.h)));
    caps.start[static_cast<std::size_t>(slot)] = j0;
    auto& r = raw[static_cast<std::size_t>(slot)];
    r.assign(static_cast<std::size_t>(std::max(0, j1 - j0 + 1)), 0.0);
    for (int j = j0; j <= j1; ++j) {
      const double x = ax.point(j) - c;
      const double u = step ? cutoff::cell_step(x, caps.spacing, T) : cutoff::bump(x / hw);
      r[static_cast<std::size_t>(j - j0)] = u;
      denom[static_cast<std::size_t>(j)] += u;
    }
  }
  const double pf = cfg.plateau_factor();
  caps.psi.resize(static_cast<std::size_t>(ncaps));
  caps.psi_tilde.resize(static_cast<std::size_t>(ncaps));
  for (int slot = 0; slot < ncaps; ++slot) {
    const double c = caps.spacing * (slot + caps.kmin);
    const auto& r = raw[static_cast<std::size_t>(slot)];
    auto& p = caps.psi[static_cast<std::size_t>(slot)];
    auto& pt = caps.psi_tilde[static_cast<std::size_t>(slot)];
    p.assign(r.size(), 0.0);
    pt.assign(r.size(), 0.0);
    for (std::size_t i = 0; i < r.size(); ++i) {
      const int j = caps.start[static_cast<std::size_t>(slot)] + static_cast<int>(i);
      if (denom[static_cast<std::size_t>(j)] > 0.0) p[i] = r[i] / denom[static_cast<std::size_t>(j)];
      pt[i] = cutoff::plateau((ax.point(j) - c) / caps.cap_radius, pf);
    }
  }
  return caps;
}

// Per-axis dual-lattice partition of unity on the FFT ring.
struct AxisLattice {
  double spacing = 0.0;                    // R^{(1+delta)/2}
  std::vector<double> v;                   // lattice values, one per kept cell
  std::vector<std::vector<double>> eta;    // per cell: weight per FFT bin (dense, size M)
  std::size_t M = 0;
};

inline AxisLattice build_axis_lattice(const AxisGrid& ax, std::size_t M, double spacing,
                                      const CutoffConfig& cfg) {
  AxisLattice lat;
  lat.spacing = spacing;
  lat.M = M;
  const bool step = cfg.eta_profile == PartitionProfile::step;
  const double T = cfg.eta_transition_factor * spacing;
  const double ring = 2.0 * 3.141592653589793238462643383279 / ax.h;  // dual circumference
  const int qmax = static_cast<int>(std::ceil(0.5 * ring / spacing)) + 1;
  std::vector<double> denom(M, 0.0);
  std::vector<std::vector<double>> raw;
  for (int q = -qmax; q <= qmax; ++q) {
    lat.v.push_back(spacing * q);
    raw.emplace_back(M, 0.0);
  }
  auto xi_of_bin = [&](std::size_t m) {
    const long long ms = static_cast<long long>(m) <= static_cast<long long>(M) / 2
                             ? static_cast<long long>(m)
                             : static_cast<long long>(m) - static_cast<long long>(M);
    return 2.0 * 3.141592653589793238462643383279 * static_cast<double>(ms) /
           (static_cast<double>(M) * ax.h);
  };
  for (std::size_t m = 0; m < M; ++m) {
    const double xi = xi_of_bin(m);
    for (std::size_t qi = 0; qi < lat.v.size(); ++qi) {
      double d = xi - lat.v[qi];
      d -= ring * std::round(d / ring);  // wrapped distance on the ring
      const double u = step ? cutoff::cell_step(d, spacing, T) : cutoff::bump(d / spacing);
      raw[qi][m] = u;
      denom[m] += u;
    }
  }
  for (std::size_t qi = 0; qi < lat.v.size(); ++qi) {
    auto& e = raw[qi];
    bool any = false;
    for (std::size_t m = 0; m < M; ++m) {
      if (denom[m] > 0.0) e[m] /= denom[m];
      if (e[m] != 0.0) any = true;
    }
    if (any) lat.eta.push_back(std::move(e));
    else lat.eta.emplace_back();  // keep slot alignment, empty = unused
  }
  return lat;
}

}  // namespace wp_detail

struct Packet {
  Cap cap;                    // fine cap theta (center, radius R^{-1/2})
  Vec v;                      // dual lattice point in R^{(1+delta)/2} Z^{n-1}
  DensityFunction component;  // windowed to supp psi~_theta, spacing = source grid
  double l2 = 0.0;

  Tube tube(double R, double delta) const { return Tube(cap, v, R, delta); }
};

struct PacketSet {
  int n = 2;
  double R = 0.0;
  double delta = 0.1;
  std::vector<AxisGrid> source_axes;
  double source_l2 = 0.0;
  CutoffConfig config;
  std::vector<Packet> packets;
  std::size_t cap_count = 0;
  // (#caps) x (#lattice points with |v| <= 3R + W): every tube meeting B_R
  // has its v in that range, so kept packets stay below this bound
  std::size_t lattice_bound = 0;

  double packet_mass() const {
    double s = 0.0;
    for (const auto& p : packets) s += p.l2 * p.l2;
    return s;
  }
  // sum ||f_{theta,v}||^2 / ||f||^2, the (squared) orthogonality factor
  double orthogonality_factor() const {
    return source_l2 > 0.0 ? packet_mass() / (source_l2 * source_l2) : 0.0;
  }
};

inline PacketSet decompose(const DensityFunction& f, double R, double delta,
                           const CutoffConfig& cfg = CutoffConfig{}) {
  const double nominal_radius = 1.0 / std::sqrt(R);
  const double cap_radius = cfg.cap_radius_factor * nominal_radius;
  if (f.h_omega() > nominal_radius / 8.0 * (1.0 + 1e-12))
    throw ResolutionTooCoarse("decompose: need >= 8 samples across R^{-1/2}, h = " +
                              std::to_string(f.h_omega()));
  const int d = f.dim_omega();
  PacketSet out;
  out.n = f.n();
  out.R = R;
  out.delta = delta;
  out.source_axes = f.axes();
  out.source_l2 = f.l2_norm();
  out.config = cfg;
  if (out.source_l2 == 0.0) return out;

  const double lattice_spacing = std::pow(R, (1.0 + delta) / 2.0);
  std::vector<wp_detail::AxisCaps> caps;
  std::vector<wp_detail::AxisLattice> lattice;
  std::vector<std::size_t> dims;
  for (int a = 0; a < d; ++a) {
    const auto& ax = f.axes()[static_cast<std::size_t>(a)];
    caps.push_back(wp_detail::build_axis_caps(ax, nominal_radius, cfg));
    const std::size_t M = next_pow2(static_cast<std::size_t>(ax.count));
    lattice.push_back(wp_detail::build_axis_lattice(ax, M, lattice_spacing, cfg));
    dims.push_back(M);
  }
  std::size_t Mtot = 1;
  for (auto m : dims) Mtot *= m;
  double cell_volume = 1.0;
  for (int a = 0; a < d; ++a) cell_volume *= f.axes()[static_cast<std::size_t>(a)].h;

  std::size_t ncaps_tot = 1, nlat = 1;
  const double v_reach = 3.0 * R + std::pow(R, 0.5 + delta);
  for (int a = 0; a < d; ++a) {
    ncaps_tot *= static_cast<std::size_t>(caps[static_cast<std::size_t>(a)].count());
    nlat *= static_cast<std::size_t>(2 * std::floor(v_reach / lattice_spacing) + 1);
  }
  out.cap_count = ncaps_tot;
  out.lattice_bound = ncaps_tot * nlat;

  const double keep = cfg.keep_tol * out.source_l2;

  // odometer over tensor cap slots
  std::vector<int> cap_idx(static_cast<std::size_t>(d), 0);
  std::vector<cplx> g(Mtot), ghat, work;
  for (;;) {
    // assemble g = psi_theta * f on the padded ring
    std::fill(g.begin(), g.end(), cplx(0.0, 0.0));
    // support window per axis
    std::vector<int> w0(static_cast<std::size_t>(d)), wlen(static_cast<std::size_t>(d));
    bool empty = false;
    for (int a = 0; a < d; ++a) {
      const auto& ac = caps[static_cast<std::size_t>(a)];
      const int slot = cap_idx[static_cast<std::size_t>(a)];
      w0[static_cast<std::size_t>(a)] = ac.start[static_cast<std::size_t>(slot)];
      wlen[static_cast<std::size_t>(a)] = static_cast<int>(ac.psi[static_cast<std::size_t>(slot)].size());
      if (wlen[static_cast<std::size_t>(a)] == 0) empty = true;
    }
    if (!empty) {
      // iterate over the cap support window
      std::vector<int> ji(static_cast<std::size_t>(d), 0);
      for (;;) {
        double w = 1.0;
        std::size_t src = 0, dst = 0;
        for (int a = 0; a < d; ++a) {
          const auto& ac = caps[static_cast<std::size_t>(a)];
          const int slot = cap_idx[static_cast<std::size_t>(a)];
          const int j = w0[static_cast<std::size_t>(a)] + ji[static_cast<std::size_t>(a)];
          w *= ac.psi[static_cast<std::size_t>(slot)][static_cast<std::size_t>(ji[static_cast<std::size_t>(a)])];
          src = src * static_cast<std::size_t>(f.axes()[static_cast<std::size_t>(a)].count) +
                static_cast<std::size_t>(j);
          dst = dst * dims[static_cast<std::size_t>(a)] + static_cast<std::size_t>(j);
        }
        if (w != 0.0) g[dst] = w * f.at(src);
        int a = d - 1;
        for (; a >= 0; --a) {
          if (++ji[static_cast<std::size_t>(a)] < wlen[static_cast<std::size_t>(a)]) break;
          ji[static_cast<std::size_t>(a)] = 0;
        }
        if (a < 0) break;
      }

      ghat = g;
      fft_nd(ghat, dims, -1);

      // per-axis candidate cells (those with any support overlap are all cells;
      // energy screening prunes almost everything)
      std::vector<int> nq(static_cast<std::size_t>(d));
      for (int a = 0; a < d; ++a) nq[static_cast<std::size_t>(a)] =
          static_cast<int>(lattice[static_cast<std::size_t>(a)].v.size());
      std::vector<int> qi(static_cast<std::size_t>(d), 0);
      for (;;) {
        // energy of eta_q * ghat
        bool usable = true;
        for (int a = 0; a < d; ++a)
          if (lattice[static_cast<std::size_t>(a)].eta[static_cast<std::size_t>(qi[static_cast<std::size_t>(a)])]
                  .empty())
            usable = false;
        if (usable) {
          double energy = 0.0;
          if (d == 1) {
            const auto& e0 = lattice[0].eta[static_cast<std::size_t>(qi[0])];
            for (std::size_t m = 0; m < Mtot; ++m)
              if (e0[m] != 0.0) energy += e0[m] * e0[m] * std::norm(ghat[m]);
          } else {
            const auto& e0 = lattice[0].eta[static_cast<std::size_t>(qi[0])];
            const auto& e1 = lattice[1].eta[static_cast<std::size_t>(qi[1])];
            for (std::size_t m0 = 0; m0 < dims[0]; ++m0) {
              if (e0[m0] == 0.0) continue;
              const std::size_t base = m0 * dims[1];
              for (std::size_t m1 = 0; m1 < dims[1]; ++m1)
                if (e1[m1] != 0.0)
                  energy += e0[m0] * e0[m0] * e1[m1] * e1[m1] * std::norm(ghat[base + m1]);
            }
          }
          // discrete Parseval: ||w||_{L2}^2 = cell_volume / Mtot * sum |eta ghat|^2
          const double pre_l2 = std::sqrt(cell_volume / static_cast<double>(Mtot) * energy);
          if (pre_l2 >= keep) {
            work = ghat;
            if (d == 1) {
              const auto& e0 = lattice[0].eta[static_cast<std::size_t>(qi[0])];
              for (std::size_t m = 0; m < Mtot; ++m) work[m] *= e0[m];
            } else {
              const auto& e0 = lattice[0].eta[static_cast<std::size_t>(qi[0])];
              const auto& e1 = lattice[1].eta[static_cast<std::size_t>(qi[1])];
              for (std::size_t m0 = 0; m0 < dims[0]; ++m0)
                for (std::size_t m1 = 0; m1 < dims[1]; ++m1) work[m0 * dims[1] + m1] *= e0[m0] * e1[m1];
            }
            fft_nd(work, dims, +1);

            // psi~ windowed component
            std::vector<AxisGrid> waxes(static_cast<std::size_t>(d));
            std::vector<int> t0(static_cast<std::size_t>(d)), tlen(static_cast<std::size_t>(d));
            for (int a = 0; a < d; ++a) {
              const auto& ax = f.axes()[static_cast<std::size_t>(a)];
              const auto& ac = caps[static_cast<std::size_t>(a)];
              const int slot = cap_idx[static_cast<std::size_t>(a)];
              const double c = ac.spacing * (slot + ac.kmin);
              int j0 = std::max(0, static_cast<int>(std::ceil((c - cap_radius - ax.lo) / ax.h)));
              int j1 = std::min(ax.count - 1,
                                static_cast<int>(std::floor((c + cap_radius - ax.lo) / ax.h)));
              t0[static_cast<std::size_t>(a)] = j0;
              tlen[static_cast<std::size_t>(a)] = j1 - j0 + 1;
              waxes[static_cast<std::size_t>(a)] = AxisGrid{ax.point(j0), ax.h, j1 - j0 + 1};
            }
            DensityFunction comp(f.n(), waxes);
            std::vector<int> ti(static_cast<std::size_t>(d), 0);
            for (;;) {
              double pt = 1.0;
              std::size_t src = 0, dst = 0;
              for (int a = 0; a < d; ++a) {
                const auto& ax = f.axes()[static_cast<std::size_t>(a)];
                const auto& ac = caps[static_cast<std::size_t>(a)];
                const int slot = cap_idx[static_cast<std::size_t>(a)];
                const double c = ac.spacing * (slot + ac.kmin);
                const int j = t0[static_cast<std::size_t>(a)] + ti[static_cast<std::size_t>(a)];
                pt *= cutoff::plateau((ax.point(j) - c) / cap_radius, cfg.plateau_factor());
                src = src * dims[static_cast<std::size_t>(a)] + static_cast<std::size_t>(j);
                dst = dst * static_cast<std::size_t>(tlen[static_cast<std::size_t>(a)]) +
                      static_cast<std::size_t>(ti[static_cast<std::size_t>(a)]);
              }
              if (pt != 0.0) comp.at(dst) = pt * work[src];
              int a = d - 1;
              for (; a >= 0; --a) {
                if (++ti[static_cast<std::size_t>(a)] < tlen[static_cast<std::size_t>(a)]) break;
                ti[static_cast<std::size_t>(a)] = 0;
              }
              if (a < 0) break;
            }
            const double post_l2 = comp.l2_norm();
            if (post_l2 >= keep) {
              Packet p;
              Vec center(static_cast<std::size_t>(d)), vv(static_cast<std::size_t>(d));
              for (int a = 0; a < d; ++a) {
                const auto& ac = caps[static_cast<std::size_t>(a)];
                center[static_cast<std::size_t>(a)] =
                    ac.spacing * (cap_idx[static_cast<std::size_t>(a)] + ac.kmin);
                vv[static_cast<std::size_t>(a)] =
                    lattice[static_cast<std::size_t>(a)].v[static_cast<std::size_t>(qi[static_cast<std::size_t>(a)])];
              }
              p.cap = Cap(center, cap_radius, ScaleTag::fine);
              p.v = vv;
              p.component = std::move(comp);
              p.l2 = post_l2;
              out.packets.push_back(std::move(p));
            }
          }
        }
        int a = d - 1;
        for (; a >= 0; --a) {
          if (++qi[static_cast<std::size_t>(a)] < nq[static_cast<std::size_t>(a)]) break;
          qi[static_cast<std::size_t>(a)] = 0;
        }
        if (a < 0) break;
      }
    }

    int a = d - 1;
    for (; a >= 0; --a) {
      if (++cap_idx[static_cast<std::size_t>(a)] < caps[static_cast<std::size_t>(a)].count()) break;
      cap_idx[static_cast<std::size_t>(a)] = 0;
    }
    if (a < 0) break;
  }
  return out;
}

inline DensityFunction reconstruct(const PacketSet& P) {
  DensityFunction f(P.n, P.source_axes);
  for (const auto& p : P.packets) f.accumulate_window(p.component);
  return f;
}

// ||sum_S f_{theta,v}||^2 / sum_S ||f_{theta,v}||^2 for a subset of packets.
inline double subset_parseval_ratio(const PacketSet& P, const std::vector<std::size_t>& subset) {
  DensityFunction s(P.n, P.source_axes);
  double mass = 0.0;
  for (auto i : subset) {
    s.accumulate_window(P.packets[i].component);
    mass += P.packets[i].l2 * P.packets[i].l2;
  }
  if (mass == 0.0) return 1.0;
  const double n = s.l2_norm();
  return n * n / mass;
}

// Max of |Ef_{theta,v}| outside the margin-dilated tube, relative to the
// in-tube peak, measured on transverse lines at several heights.
struct LocalizationReport {
  double ratio = 0.0;
  double in_peak = 0.0;
  double out_max = 0.0;
};

inline LocalizationReport tube_localization_report(const PacketSet& P, std::size_t packet_index,
                                                   double margin = 2.0,
                                                   double c_quad = kDefaultCQuad) {
  const auto& p = P.packets[packet_index];
  if (p.l2 == 0.0) return {};
  if (P.n != 2)
    throw std::domain_error("tube_localization_report: field sampling implemented for n = 2");
  const double R = P.R;
  Tube t = p.tube(R, P.delta);
  const double W = t.radius;

  std::vector<Vec> inside, outside;
  for (double s : {-0.9, -0.6, -0.3, 0.0, 0.3, 0.6, 0.9}) {
    const double xn = s * R;
    Vec ax = t.axis_point(xn);
    if (norm(ax) > R) continue;
    for (double off : {0.0, 0.4, -0.4}) inside.push_back({ax[0] + off * W, xn});
    for (double off : {margin + 0.05, margin + 0.5, margin + 1.0, margin + 2.0, margin + 4.0,
                       -(margin + 0.05), -(margin + 0.5), -(margin + 1.0), -(margin + 2.0),
                       -(margin + 4.0)}) {
      Vec x = {ax[0] + off * W, xn};
      if (norm(x) <= R) outside.push_back(std::move(x));
    }
  }
  if (inside.empty() || outside.empty()) return {};
  auto Ein = evaluate_extension(p.component, inside, R, c_quad);
  auto Eout = evaluate_extension(p.component, outside, R, c_quad);
  LocalizationReport rep;
  for (auto v : Ein.values) rep.in_peak = std::max(rep.in_peak, std::abs(v));
  for (auto v : Eout.values) rep.out_max = std::max(rep.out_max, std::abs(v));
  rep.ratio = rep.in_peak > 0.0 ? rep.out_max / rep.in_peak : 0.0;
  return rep;
}

// vbar(omega, y) = y' + 2 y_n omega: the dual-lattice shift induced by
// recentring the ball at y.
inline Vec vbar(const Vec& omega, const Vec& y) {
  Vec r(omega.size());
  for (std::size_t i = 0; i < omega.size(); ++i) r[i] = y[i] + 2.0 * y.back() * omega[i];
  return r;
}

// Wave packet decomposition of f~ = modulate_to_ball(f, y) at scale rho.
inline PacketSet redecompose_at_ball(const DensityFunction& f, double R, const Vec& y, double rho,
                                     double delta, const CutoffConfig& cfg = CutoffConfig{}) {
  if (!(rho > std::sqrt(R)) || !(rho <= R))
    throw ScaleOrderViolation("need R^{1/2} < rho <= R, got rho = " + std::to_string(rho));
  DensityFunction ft = modulate_to_ball(f, y);
  return decompose(ft, rho, delta, cfg);
}

// Membership of a rho-scale packet (theta~, v~) in the set tilde T_{theta,v}:
//   dist(theta, theta~) <= C rho^{-1/2} and |v + vbar(theta,y) - v~| <= C R^{(1+delta)/2}.
inline bool in_tilde_set(const Cap& theta, const Vec& v, const Vec& y, double R, double rho,
                         double delta, const Cap& theta_tilde, const Vec& v_tilde,
                         double membership_constant = 2.0) {
  const double C = membership_constant;
  if (dist(theta.center, theta_tilde.center) > C / std::sqrt(rho)) return false;
  Vec shifted = add(v, vbar(theta.center, y));
  return dist(shifted, v_tilde) <= C * std::pow(R, (1.0 + delta) / 2.0);
}

// Fraction of a fine packet's L2 mass captured by tilde T_{theta,v} when
// re-decomposed at scale rho around y.
struct TildeMassReport {
  double mass_in = 0.0;
  double mass_total = 0.0;
  double fraction() const { return mass_total > 0.0 ? mass_in / mass_total : 1.0; }
};

inline TildeMassReport tilde_mass_report(const PacketSet& P, std::size_t packet_index, const Vec& y,
                                         double rho) {
  const auto& p = P.packets[packet_index];
  DensityFunction full(P.n, P.source_axes);
  full.accumulate_window(p.component);
  PacketSet Q = redecompose_at_ball(full, P.R, y, rho, P.delta, P.config);
  TildeMassReport rep;
  for (const auto& q : Q.packets) {
    rep.mass_total += q.l2 * q.l2;
    if (in_tilde_set(p.cap, p.v, y, P.R, rho, P.delta, q.cap, q.v, P.config.membership_constant))
      rep.mass_in += q.l2 * q.l2;
  }
  return rep;
}

// Equivalence classes T_{theta~, w} of fine packets on a smaller ball.
struct CoarsePacketClass {
  Cap theta_tilde;                  // rho^{-1/2} cap
  Vec w;                            // lattice point in R^{1/2+delta/2} Z^{n-1}
  std::vector<std::size_t> members; // indices into the fine PacketSet
  Tube tube;                        // radius R^{1/2+delta}, length rho, in recentred coordinates
};

inline std::vector<CoarsePacketClass> coarse_classes(const PacketSet& P, const Vec& y, double rho) {
  if (!(rho > std::sqrt(P.R)) || !(rho <= P.R))
    throw ScaleOrderViolation("coarse_classes: need R^{1/2} < rho <= R");
  const int d = P.n - 1;
  const double coarse_radius = P.config.cap_radius_factor / std::sqrt(rho);
  const double coarse_spacing = P.config.psi_spacing_factor / std::sqrt(rho);
  const double wspacing = std::pow(P.R, (1.0 + P.delta) / 2.0);

  std::map<std::vector<long>, CoarsePacketClass> classes;
  for (std::size_t i = 0; i < P.packets.size(); ++i) {
    const auto& p = P.packets[i];
    Vec shift = add(p.v, vbar(p.cap.center, y));
    std::vector<long> key;
    Vec tcenter(static_cast<std::size_t>(d)), wv(static_cast<std::size_t>(d));
    for (int a = 0; a < d; ++a) {
      long ck = std::lround(p.cap.center[static_cast<std::size_t>(a)] / coarse_spacing);
      long wk = std::lround(shift[static_cast<std::size_t>(a)] / wspacing);
      key.push_back(ck);
      key.push_back(wk);
      tcenter[static_cast<std::size_t>(a)] = coarse_spacing * ck;
      wv[static_cast<std::size_t>(a)] = wspacing * wk;
    }
    auto it = classes.find(key);
    if (it == classes.end()) {
      CoarsePacketClass c;
      c.theta_tilde = Cap(tcenter, coarse_radius, ScaleTag::fine);
      c.w = wv;
      c.tube = Tube(c.theta_tilde, wv, std::pow(P.R, 0.5 + P.delta), rho, rho);
      it = classes.emplace(std::move(key), std::move(c)).first;
    }
    it->second.members.push_back(i);
  }
  std::vector<CoarsePacketClass> out;
  out.reserve(classes.size());
  for (auto& kv : classes) out.push_back(std::move(kv.second));
  return out;
}

// sum over classes of ||sum of members||^2, relative to ||g||^2 where g is the
// sum of all packets.
inline double class_orthogonality_factor(const PacketSet& P,
                                         const std::vector<CoarsePacketClass>& classes) {
  DensityFunction g(P.n, P.source_axes);
  for (const auto& p : P.packets) g.accumulate_window(p.component);
  const double g2 = g.l2_norm() * g.l2_norm();
  if (g2 == 0.0) return 1.0;
  double s = 0.0;
  for (const auto& c : classes) {
    DensityFunction cs(P.n, P.source_axes);
    for (auto i : c.members) cs.accumulate_window(P.packets[i].component);
    const double cn = cs.l2_norm();
    s += cn * cn;
  }
  return s / g2;
}

// max over members of angle(G(theta), G(theta~)).
inline double angle_consistency_check(const PacketSet& P, const CoarsePacketClass& cls) {
  if (cls.members.empty()) throw std::domain_error("angle_consistency_check: empty class");
  Vec gt = direction_of(cls.theta_tilde.center);
  double m = 0.0;
  for (auto i : cls.members)
    m = std::max(m, angle_between_vectors(direction_of(P.packets[i].cap.center), gt));
  return m;
}

// Symmetric sampled Hausdorff distance between two point clouds.
inline double hausdorff_distance(const std::vector<Vec>& A, const std::vector<Vec>& B) {
  if (A.empty() || B.empty()) throw std::domain_error("hausdorff_distance: empty set");
  auto directed = [](const std::vector<Vec>& X, const std::vector<Vec>& Y) {
    double worst = 0.0;
    for (const auto& x : X) {
      double best = 1e300;
      for (const auto& y : Y) best = std::min(best, dist(x, y));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(A, B), directed(B, A));
}

// Sample points of a tube (optionally restricted to a ball) on a regular grid.
inline std::vector<Vec> sample_tube(const Tube& t, double spacing,
                                    const std::optional<std::pair<Vec, double>>& ball = std::nullopt) {
  std::vector<Vec> pts;
  const int d = static_cast<int>(t.cap.center.size());
  if (d != 1) throw std::domain_error("sample_tube: implemented for n = 2");
  for (double xn = -t.ambient_R; xn <= t.ambient_R + 1e-9; xn += spacing) {
    Vec ax = t.axis_point(xn);
    for (double off = -t.radius; off <= t.radius + 1e-9; off += spacing) {
      Vec x = {ax[0] + off, xn};
      if (norm(x) > t.ambient_R) continue;
      if (ball && dist(x, ball->first) > ball->second) continue;
      pts.push_back(std::move(x));
    }
  }
  return pts;
}

}  // namespace rlab
