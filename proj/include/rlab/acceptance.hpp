#pragma once

// Acceptance suite: one runner per criterion, each printing a single
// pass/fail line with the measured quantities.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "rlab/broad_norm.hpp"
#include "rlab/exponents.hpp"
#include "rlab/extension.hpp"
#include "rlab/geometry.hpp"
#include "rlab/partition.hpp"
#include "rlab/rng.hpp"
#include "rlab/sharp_examples.hpp"
#include "rlab/variety.hpp"
#include "rlab/wave_packets.hpp"

namespace rlab::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

namespace detail {

inline double plateau_profile(double t, double a, double b) {
  double u = std::fabs(t);
  if (u <= a) return 1.0;
  if (u >= b) return 0.0;
  double s = (u - a) / (b - a);
  double x = 1.0 - s;
  double ex = std::exp(-1.0 / x), es = std::exp(-1.0 / s);
  return ex / (ex + es);
}

// smooth analytic profile (no grid resampling): low-frequency trig polynomial
// under a plateau cutoff supported in |t| <= 0.85
inline std::function<cplx(double)> random_profile(Rng rng, int modes = 8) {
  std::vector<double> cr, ci, fr, ph;
  for (int j = 0; j < modes; ++j) {
    cr.push_back(rng.gaussian());
    ci.push_back(rng.gaussian());
    fr.push_back(rng.uniform(0.5, 3.0));
    ph.push_back(rng.uniform(0.0, 6.28318));
  }
  return [cr, ci, fr, ph, modes](double t) -> cplx {
    const double cut = plateau_profile(t, 0.65, 0.85);
    if (cut == 0.0) return {0.0, 0.0};
    cplx s(0.3, 0.0);
    for (int j = 0; j < modes; ++j)
      s += cplx(cr[static_cast<std::size_t>(j)], ci[static_cast<std::size_t>(j)]) *
           std::cos(fr[static_cast<std::size_t>(j)] * 3.0 * t + ph[static_cast<std::size_t>(j)]);
    return cut * s;
  };
}

// the standard random smooth density used across criteria: low-frequency trig
// polynomial under a plateau cutoff supported in |omega| <= 0.85
inline DensityFunction random_density(int n, double phase_scale, Rng rng, int modes = 8) {
  std::vector<double> cr, ci, fr, ph;
  for (int j = 0; j < modes * (n - 1); ++j) {
    cr.push_back(rng.gaussian());
    ci.push_back(rng.gaussian());
    fr.push_back(rng.uniform(0.5, 3.0));
    ph.push_back(rng.uniform(0.0, 6.28318));
  }
  const int count = 2 * static_cast<int>(std::ceil(phase_scale / kDefaultCQuad)) + 1;
  std::vector<AxisGrid> axes(static_cast<std::size_t>(n - 1), symmetric_axis(1.0, count));
  DensityFunction f(n, axes);
  f.fill([&](const Vec& w) -> cplx {
    double cut = 1.0;
    for (double wi : w) cut *= plateau_profile(wi, 0.65, 0.85);
    if (cut == 0.0) return {0.0, 0.0};
    cplx s(0.3, 0.0);
    int idx = 0;
    for (std::size_t a = 0; a < w.size(); ++a)
      for (int j = 0; j < modes; ++j, ++idx)
        s += cplx(cr[static_cast<std::size_t>(idx)], ci[static_cast<std::size_t>(idx)]) *
             std::cos(fr[static_cast<std::size_t>(idx)] * 3.0 * w[a] + ph[static_cast<std::size_t>(idx)]);
    return cut * s;
  });
  return f;
}

template <typename F>
CriterionResult timed(int id, const std::string& name, F&& body) {
  CriterionResult res;
  res.id = id;
  res.name = name;
  auto t0 = std::chrono::steady_clock::now();
  try {
    body(res);
  } catch (const std::exception& e) {
    res.pass = false;
    res.detail += std::string(" exception: ") + e.what();
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

}  // namespace detail

// 1. Exact exponent identities.
inline CriterionResult criterion_exponents() {
  return detail::timed(1, "exponent identities", [](CriterionResult& res) {
    bool ok = theorem1_exponent(4) == Rational(14, 5);
    for (int n = 2; n <= 12; ++n) ok = ok && critical_exponent(n, n) == Rational(2 * n, n - 1);
    for (int n = 2; n <= 12; ++n)
      for (int k = 2; k <= n; ++k)
        ok = ok && broad_e(k, n, critical_exponent(k, n)) == Rational(1, 2);
    for (int n = 2; n <= 12; n += 2)
      ok = ok && regular_lower_bound(choose_k(n), n) == critical_exponent(choose_k(n), n);
    for (int n = 2; n <= 8; ++n)
      for (int k = 2; k <= n; ++k)
        ok = ok && predicted_slab_exponent(n, k, critical_exponent(k, n)) == Rational(0);
    res.pass = ok;
    res.detail = "theorem1(4) = " + theorem1_exponent(4).str() +
                 ", broad_e(k,n,p_bar) = 1/2 and slab exponent zero at p_bar for all tested (k,n)";
  });
}

// 2. Plancherel slice identity at n = 2, R = 256.
inline CriterionResult criterion_plancherel(std::uint64_t seed = 2026) {
  return detail::timed(2, "Plancherel slice", [seed](CriterionResult& res) {
    const double R = 256.0;
    const double W = 8.0 * R;
    bool ok = true;
    double worst = 1.0;
    Rng root(seed);
    for (int trial = 0; trial < 5; ++trial) {
      auto f = detail::random_density(2, (W + 2.0 * R) / 3.0, root.derive(trial));
      const double xn = trial == 4 ? R / 2.0 : R * (trial - 1.5) / 3.0;
      auto [slice, fl2] = slice_l2(f, R, xn);
      const double ratio = slice / fl2;
      if (std::fabs(ratio - 1.0) > std::fabs(worst - 1.0)) worst = ratio;
      ok = ok && ratio >= 0.99 && ratio <= 1.01;
    }
    res.pass = ok;
    std::ostringstream os;
    os << "worst slice ratio " << worst << " over 5 seeded densities (gate [0.99, 1.01])";
    res.detail = os.str();
  });
}

// 3. Wave packets at n = 2, R = 256.
inline CriterionResult criterion_wave_packets(std::uint64_t seed = 2027) {
  return detail::timed(3, "wave packet decomposition", [seed](CriterionResult& res) {
    const double R = 256.0;
    // grid finer than the evaluation minimum so localization fields are clean
    auto f = detail::random_density(2, 4.0 * R, Rng(seed));
    auto P = decompose(f, R, kDefaultPacketDelta);
    auto g = reconstruct(P);
    DensityFunction err = f;
    err.add_scaled(g, cplx(-1.0, 0.0));
    const double recon = err.l2_norm() / f.l2_norm();
    const double orth = P.orthogonality_factor();

    // localization of the most central heavy packet and two runners-up
    std::vector<std::size_t> order(P.packets.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      auto score = [&](std::size_t i) {
        return std::fabs(P.packets[i].cap.center[0]) + std::fabs(P.packets[i].v[0]) / R -
               P.packets[i].l2;
      };
      return score(a) < score(b);
    });
    double loc = 0.0;
    for (std::size_t oi = 0; oi < std::min<std::size_t>(3, order.size()); ++oi)
      loc = std::max(loc, tube_localization_report(P, order[oi], 2.0).ratio);

    res.pass = recon <= 1e-3 && orth >= 0.5 && orth <= 2.0 && loc <= 1e-3;
    std::ostringstream os;
    os << "reconstruction " << recon << " (gate 1e-3), orthogonality " << orth
       << " (gate [0.5, 2]), localization@margin2 " << loc << " (gate 1e-3), packets "
       << P.packets.size();
    res.detail = os.str();
  });
}

// 4. Re-decomposition bookkeeping at R = 1024, rho = 256.
inline CriterionResult criterion_redecomposition(std::uint64_t seed = 2028) {
  return detail::timed(4, "smaller-ball re-decomposition", [seed](CriterionResult& res) {
    const double R = 1024.0;
    const double rho = 256.0;
    const double delta = kDefaultPacketDelta;
    auto f = detail::random_density(2, 2.0 * R, Rng(seed));
    auto P = decompose(f, R, delta);
    const Vec y = {100.0, -300.0};

    std::vector<std::size_t> order(P.packets.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return P.packets[a].l2 > P.packets[b].l2; });
    double worst_fraction = 1.0;
    for (std::size_t oi = 0; oi < std::min<std::size_t>(3, order.size()); ++oi)
      worst_fraction = std::min(worst_fraction, tilde_mass_report(P, order[oi], y, rho).fraction());

    auto classes = coarse_classes(P, y, rho);
    const double class_orth = class_orthogonality_factor(P, classes);

    // Hausdorff between T_{theta~,w} and T_{theta,v} cap B(y,rho), measured on
    // thin geometric tubes (delta = 0.1) where the 4 R^{1/2+delta} bound is
    // non-vacuous
    const double gdelta = 0.1;
    double worst_haus = 0.0;
    Rng hrng(seed);
    const double coarse_spacing = 0.8 / std::sqrt(rho);
    const double wspacing = std::pow(R, (1.0 + gdelta) / 2.0);
    for (int t = 0; t < 6; ++t) {
      Cap theta({hrng.uniform(-0.5, 0.5)}, 1.0 / std::sqrt(R));
      // tube through B(y, rho/2)
      Vec v = {-y[0] - 2.0 * (y[1] + hrng.uniform(-rho / 2, rho / 2)) * theta.center[0]};
      Tube fine(theta, v, R, gdelta);
      double tc = coarse_spacing * std::lround(theta.center[0] / coarse_spacing);
      Vec shift = add(v, vbar(theta.center, y));
      Vec w = {wspacing * std::lround(shift[0] / wspacing)};
      Cap ttilde({tc}, 1.0 / std::sqrt(rho));
      Tube coarse(ttilde, w, std::pow(R, 0.5 + gdelta), rho, rho);
      auto A = sample_tube(coarse, std::pow(R, 0.5 + gdelta) / 6.0);
      for (auto& pnt : A) pnt = add(pnt, y);
      auto B = sample_tube(fine, std::pow(R, 0.5 + gdelta) / 6.0, std::make_pair(y, rho));
      if (A.empty() || B.empty()) continue;
      worst_haus = std::max(worst_haus, hausdorff_distance(A, B) / std::pow(R, 0.5 + gdelta));
    }

    res.pass = worst_fraction >= 0.99 && worst_haus <= 4.0 && class_orth >= 0.5 && class_orth <= 2.0;
    std::ostringstream os;
    os << "tilde-set mass fraction " << worst_fraction << " (gate 0.99), Hausdorff constant "
       << worst_haus << " (gate 4), class orthogonality " << class_orth << " (gate [0.5, 2])";
    res.detail = os.str();
  });
}

// 5. Broad-norm algebra: triangle, Holder, A-monotonicity, narrow counts.
inline CriterionResult criterion_broad_norm(std::uint64_t seed = 2029) {
  return detail::timed(5, "broad-norm algebra", [seed](CriterionResult& res) {
    const double R = 128.0, K = 8.0;
    const int trials = 100;
    auto cands = candidate_subspaces(make_coarse_caps(K, 2), 2, 2);
    Rng root(seed);
    int tri_viol = 0, holder_viol = 0, mono_viol = 0;
    for (int t = 0; t < trials; ++t) {
      auto g = detail::random_density(2, R, root.derive(3 * t));
      auto h = detail::random_density(2, R, root.derive(3 * t + 1));
      BroadParams pp{2, 2, K, 3.0};
      if (!check_triangle(g, h, R, pp, cands)) ++tri_viol;
      auto fh = detail::random_density(2, R, root.derive(3 * t + 2));
      if (!check_holder(fh, R, 2, K, 1, 1, Rational(2), Rational(6), Rational(1, 2), Rational(1, 2),
                        cands))
        ++holder_viol;
      // A-monotonicity on the same field
      BroadParams base{2, 0, K, 3.0};
      auto bundle = make_bundle(fh, R, base, {3.0});
      for (std::size_t b = 0; b < bundle.cover.size(); ++b) {
        double prev = 1e300;
        for (int A = 0; A <= 2; ++A) {
          BroadParams pa{2, A, K, 3.0};
          const double m = mu_broad(bundle, b, pa, cands);
          if (m > prev * (1.0 + 1e-12)) ++mono_viol;
          prev = m;
        }
      }
    }
    // narrow-count constant over K and dimensions
    int worst_count = 0;
    double worst_norm = 0.0;
    for (double KK : {4.0, 8.0, 16.0}) {
      for (int n = 2; n <= 4; ++n) {
        auto caps = make_coarse_caps(KK, n);
        Rng vr = root.derive(static_cast<std::uint64_t>(KK * 100 + n));
        for (int t = 0; t < 30; ++t) {
          const int k = (n == 2) ? 2 : 3;
          std::vector<Vec> span;
          for (int i = 0; i < k - 1; ++i) span.push_back(vr.gaussian_vector(n));
          const int c = narrow_cap_count(caps, Subspace::span_of(span), KK);
          const double normalized = c / std::pow(KK, k - 2);
          if (normalized > worst_norm) {
            worst_norm = normalized;
            worst_count = c;
          }
        }
        // adversarial: subspaces through actual cap directions
        for (std::size_t ci = 0; ci < caps.caps.size(); ci += 3) {
          const int k = (n == 2) ? 2 : 3;
          std::vector<Vec> span = {direction_of(caps.caps[ci].center)};
          if (k == 3) span.push_back(direction_of(caps.caps[(ci + 7) % caps.caps.size()].center));
          try {
            const int c = narrow_cap_count(caps, Subspace::span_of(span), KK);
            const double normalized = c / std::pow(KK, k - 2);
            if (normalized > worst_norm) {
              worst_norm = normalized;
              worst_count = c;
            }
          } catch (const std::domain_error&) {
          }
        }
      }
    }
    res.pass = tri_viol == 0 && holder_viol == 0 && mono_viol == 0 && worst_norm <= 10.0;
    std::ostringstream os;
    os << "violations: triangle " << tri_viol << ", Holder " << holder_viol << ", A-monotonicity "
       << mono_viol << " over " << trials << " trials; narrow-count constant " << worst_norm
       << " (gate 10, worst count " << worst_count << ")";
    res.detail = os.str();
  });
}

// 6. Polynomial partitioning: balance windows, crossings, tube incidences.
inline CriterionResult criterion_partitioning(std::uint64_t seed = 2030) {
  return detail::timed(6, "polynomial partitioning", [seed](CriterionResult& res) {
    Rng root(seed);
    bool balance_ok = true;
    int built = 0;
    for (int D : {2, 3, 4}) {
      for (int s = 0; s < 10; ++s) {
        Rng mr = root.derive(D * 100 + s);
        WeightedPoints mu;
        for (int i = 0; i < 10000; ++i)
          mu.push({mr.uniform(-1.0, 1.0), mr.uniform(-1.0, 1.0)}, mr.uniform(0.5, 1.5));
        auto part = partition_measure(mu, D, root.derive(s).next_u64());
        ++built;
        const double total = mu.total();
        const double lo = std::pow(2.0, -part.S - 2) * total;
        const double hi = std::pow(2.0, -part.S + 2) * total;
        for (const auto& kv : part.cells)
          if (kv.second < lo || kv.second > hi) balance_ok = false;
      }
    }
    // crossing and incidence fuzz against one partition per D
    int crossing_viol = 0, tube_viol = 0;
    for (int D : {2, 3, 4}) {
      Rng mr = root.derive(D * 1000 + 7);
      const double Rbox = 100.0;
      WeightedPoints mu;
      for (int i = 0; i < 6000; ++i)
        mu.push({mr.uniform(-Rbox, Rbox), mr.uniform(-Rbox, Rbox)}, 1.0);
      auto part = partition_measure(mu, D, root.derive(D).next_u64());
      const int bound = part.total_degree() + 1;
      for (int t = 0; t < 334; ++t) {
        Vec a = {mr.uniform(-Rbox, Rbox), mr.uniform(-Rbox, Rbox)};
        Vec b = {mr.uniform(-Rbox, Rbox), mr.uniform(-Rbox, Rbox)};
        if (line_cell_crossings(a, b, part, 10000) > bound) ++crossing_viol;
      }
      const double wall = std::pow(Rbox, 0.5 + 0.1);
      std::vector<Tube> tubes;
      for (int t = 0; t < 67; ++t) {
        Cap cap({mr.uniform(-0.7, 0.7)}, 0.1);
        tubes.emplace_back(cap, Vec{mr.uniform(-Rbox, Rbox)}, Rbox, 0.1);
      }
      for (const auto& inc : tube_cell_incidences(tubes, part, wall, 1000))
        if (static_cast<int>(inc.cells.size()) > bound) ++tube_viol;
    }
    res.pass = balance_ok && crossing_viol == 0 && tube_viol == 0;
    std::ostringstream os;
    os << built << " partitions balanced in [2^{-S-2}, 2^{-S+2}]: " << (balance_ok ? "yes" : "no")
       << "; crossing violations " << crossing_viol << "/1002, tube-incidence violations "
       << tube_viol << "/201";
    res.detail = os.str();
  });
}

// 7. Slab scaling slopes at p = 4 and p = 3.
inline CriterionResult criterion_slab_scaling(std::uint64_t seed = 2031) {
  return detail::timed(7, "slab scaling", [seed](CriterionResult& res) {
    const std::vector<double> Rs = {64.0, 128.0, 256.0, 512.0};
    const double K = 4.0;  // K^2-cubes must resolve B_R at every pinned R
    auto run4 = scaling_experiment(2, 2, Rs, 4.0, K, 0, seed);
    auto run3 = scaling_experiment(2, 2, Rs, 3.0, K, 0, seed);
    const bool ok4 = std::fabs(run4.slope - 0.0) <= 0.1;
    const bool ok3 = std::fabs(run3.slope - 1.0 / 6.0) <= 0.08;
    res.pass = ok4 && ok3;
    std::ostringstream os;
    os << "slope(p=4) = " << run4.slope << " (gate 0 +- 0.1), slope(p=3) = " << run3.slope
       << " (gate 0.1667 +- 0.08), residuals " << run4.residual << " / " << run3.residual;
    res.detail = os.str();
  });
}

// 8. Theta(Z) scaling for a 2-plane in R^3.
inline CriterionResult criterion_theta_count(std::uint64_t seed = 2032) {
  return detail::timed(8, "Theta(Z) plane count", [seed](CriterionResult& res) {
    auto Z = hyperplane_variety(3, {1.0, 0.0, 0.0}, 0.0);
    auto t64 = theta_count(Z, 64.0, 0.1, 20000, seed);
    auto t256 = theta_count(Z, 256.0, 0.1, 60000, seed + 1);
    const double slope =
        std::log(static_cast<double>(t256.count) / static_cast<double>(t64.count)) /
        std::log(256.0 / 64.0);
    res.pass = t64.count > 0 && t256.count > 0 && std::fabs(slope - 0.5) <= 0.2;
    std::ostringstream os;
    os << "count(64) = " << t64.count << ", count(256) = " << t256.count << ", slope " << slope
       << " (gate 0.5 +- 0.2)";
    res.detail = os.str();
  });
}

// 9. Uncertainty and transverse equidistribution.
inline CriterionResult criterion_equidistribution(std::uint64_t seed = 2033) {
  return detail::timed(9, "uncertainty / equidistribution", [seed](CriterionResult& res) {
    const double conc1 = concentration_check(1.0, 0.25, 50, 1, seed);
    const double conc2 = concentration_check(1.0, 0.5, 50, 2, seed + 1);

    // tangent-packet field against the hyperplane {x1 = 0} at R = 1024.  The
    // T_{B,Z} selection is realized at the thin-tube scale delta_m = 0.1:
    // angle condition |omega_theta| <= R^{-1/2+delta_m} and axis position
    // |v| <= R^{1/2+delta_m} (the neighborhood widths rho^{1/2+delta_m} add
    // -delta_m to the fitted slope, so small delta_m keeps the gate honest).
    const double R = 1024.0;
    const double delta = kDefaultPacketDelta;
    const double delta_m = 0.1;
    auto f = detail::random_density(2, 2.0 * R, Rng(seed + 2));
    auto P = decompose(f, R, delta);
    auto Z = hyperplane_variety(2, {1.0, 0.0}, 0.0);
    const Vec Bc = {0.0, 0.0};
    const double angle_thr = std::pow(R, -0.5 + delta_m);
    const double pos_thr = std::pow(R, 0.5 + delta_m);
    DensityFunction g(P.n, P.source_axes);
    int used = 0;
    for (const auto& p : P.packets) {
      if (std::fabs(p.cap.center[0]) > angle_thr) continue;
      if (std::fabs(p.v[0]) > pos_thr) continue;
      g.accumulate_window(p.component);
      ++used;
    }
    double slope = 0.0;
    bool used_ok = used > 0;
    if (used_ok) {
      std::vector<double> rhos = {64.0, 256.0}, fracs;
      for (double rho : rhos)
        fracs.push_back(
            transverse_equidistribution_check(g, R, Z, Bc, delta_m, rho, seed + 4).fraction);
      // against log(R/rho) the predicted slope is -(n-m)/2 = -1/2
      slope = std::log(fracs[1] / fracs[0]) / std::log((R / rhos[1]) / (R / rhos[0]));
    }
    res.pass = conc1 <= 10.0 && conc2 <= 10.0 && used_ok && std::fabs(slope - (-0.5)) <= 0.2;
    std::ostringstream os;
    os << "concentration constants " << conc1 << " (1-D), " << conc2
       << " (2-D) (gate 10); equidistribution slope " << slope << " vs -(n-m)/2 = -0.5 +- 0.2 ("
       << used << " tangent packets)";
    res.detail = os.str();
  });
}

// 10. Parabolic rescaling modulus identity, two independent quadratures.
inline CriterionResult criterion_parabolic(std::uint64_t seed = 2034) {
  return detail::timed(10, "parabolic rescaling", [seed](CriterionResult& res) {
    const double R = 64.0;
    double worst = 0.0;
    Rng root(seed);
    for (double K : {2.0, 4.0}) {
      Cap tau({1.0 / (2.0 * K)}, 1.0 / K);
      Rng rng = root.derive(static_cast<std::uint64_t>(K));
      auto profile = detail::random_profile(rng.derive("profile"));
      auto in_tau = [&](const Vec& w) -> cplx {
        double t = (w[0] - tau.center[0]) * K;
        if (std::fabs(t) >= 0.999) return {0.0, 0.0};
        return profile(t);
      };
      DensityFunction f(2, {symmetric_axis(1.0, 2 * static_cast<int>(3.0 * R / 0.25) + 1)});
      f.fill(in_tau);
      auto [ft, map] = parabolic_rescale(f, tau, K);
      // rebuild f~ analytically on an unaligned grid: independent quadrature
      DensityFunction ft2(2, {symmetric_axis(1.0, 5113)});
      ft2.fill([&](const Vec& wt) { return in_tau({wt[0] / K + tau.center[0]}); });
      std::vector<Vec> xs, xts;
      for (int i = 0; i < 50; ++i) {
        Vec x = {rng.uniform(-R, R), rng.uniform(-R, R)};
        xts.push_back(map.apply(x));
        xs.push_back(std::move(x));
      }
      auto Ef = evaluate_extension(f, xs, R);
      auto Eft = evaluate_extension(ft2, xts, R / K);
      const double amp = map.amplitude_factor(2);
      double scale = 0.0;
      for (auto v : Ef.values) scale = std::max(scale, std::abs(v));
      for (std::size_t i = 0; i < xs.size(); ++i)
        worst = std::max(worst, std::fabs(std::abs(Ef.values[i]) - amp * std::abs(Eft.values[i])) /
                                    std::max(1e-300, scale));
    }
    res.pass = worst <= 1e-5;
    std::ostringstream os;
    os << "worst relative modulus mismatch " << worst << " over K in {2,4}, 50 points each (gate 1e-5)";
    res.detail = os.str();
  });
}

// 11. Quadric line family and broadness probe.
inline CriterionResult criterion_quadric(std::uint64_t seed = 2035) {
  return detail::timed(11, "quadric geometry", [seed](CriterionResult& res) {
    const double R = 64.0;
    auto Q = quadric_polynomial(R);
    double worst_line = 0.0;
    auto lines = quadric_line_family(R, {R, 0.0, 0.0, 0.0}, 64);
    for (const auto& l : lines)
      for (int s = 0; s <= 10; ++s) {
        const double t = -2.0 * R + 4.0 * R * s / 10.0;
        worst_line = std::max(worst_line, std::fabs(Q.eval(axpy(t, l.direction, l.point))));
      }
    auto probe = quadric_broadness_probe(R, 8, 8.0, seed, 64);
    res.pass = worst_line <= 1e-6 && probe.max_fraction <= 0.5;
    std::ostringstream os;
    os << "worst |Q| along lines " << worst_line << " (gate 1e-6), broadness max fraction "
       << probe.max_fraction << " (gate 0.5, " << probe.planes_checked << " planes)";
    res.detail = os.str();
  });
}

inline std::vector<CriterionResult> run_all() {
  std::vector<CriterionResult> out;
  out.push_back(criterion_exponents());
  out.push_back(criterion_plancherel());
  out.push_back(criterion_wave_packets());
  out.push_back(criterion_redecomposition());
  out.push_back(criterion_broad_norm());
  out.push_back(criterion_partitioning());
  out.push_back(criterion_slab_scaling());
  out.push_back(criterion_theta_count());
  out.push_back(criterion_equidistribution());
  out.push_back(criterion_parabolic());
  out.push_back(criterion_quadric());
  return out;
}

inline int print_and_score(const std::vector<CriterionResult>& results) {
  int fails = 0;
  for (const auto& r : results) {
    std::printf("%s criterion %d (%s): %s [%.1f s]\n", r.pass ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.detail.c_str(), r.seconds);
    if (!r.pass) ++fails;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(results.size()) - fails, results.size());
  return fails;
}

}  // namespace rlab::acceptance
