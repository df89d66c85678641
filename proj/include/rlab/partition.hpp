#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "rlab/errors.hpp"
#include "rlab/geometry.hpp"
#include "rlab/polynomial.hpp"
#include "rlab/rng.hpp"

namespace rlab {

struct WeightedPoints {
  std::vector<Vec> points;
  std::vector<double> weights;

  double total() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
  }
  void push(Vec p, double w) {
    if (!(w > 0.0)) throw std::domain_error("WeightedPoints: weights must be positive");
    points.push_back(std::move(p));
    weights.push_back(w);
  }
  std::size_t size() const { return points.size(); }
};

inline std::size_t lifted_dimension(int n, int degree) {
  return multi_indices(n, degree).size();
}

namespace ham_detail {

struct LiftedPiece {
  std::vector<double> phi;  // size() x dim, row-major lifted coordinates
  std::vector<double> w;
  double total = 0.0;
  std::size_t dim = 0;

  double signed_imbalance(const std::vector<double>& a) const {
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      double t = 0.0;
      const double* row = &phi[i * dim];
      for (std::size_t d = 0; d < dim; ++d) t += a[d] * row[d];
      s += w[i] * (t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0));
    }
    return s / total;
  }

  double smooth_imbalance(const std::vector<double>& a, double sigma,
                          std::vector<double>* grad) const {
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      double t = 0.0;
      const double* row = &phi[i * dim];
      for (std::size_t d = 0; d < dim; ++d) t += a[d] * row[d];
      const double th = std::tanh(t / sigma);
      s += w[i] * th;
      if (grad) {
        const double sech2 = (1.0 - th * th) * w[i] / (sigma * total);
        for (std::size_t d = 0; d < dim; ++d) (*grad)[d] += sech2 * row[d];
      }
    }
    return s / total;
  }
};

// Exact minimization of max_j |d_j(a + t dir)| over t: the objective is
// piecewise constant in t with breakpoints where a point changes side, so a
// sorted sweep with running per-piece sums finds the global 1-D minimum.
inline double exact_line_search(const std::vector<LiftedPiece>& lifted,
                                const std::vector<double>& a, const std::vector<double>& dir,
                                double* best_obj_out) {
  struct Breakpoint {
    double t;
    int piece;
    double delta;  // change of the piece's signed sum when crossing upward
  };
  std::vector<Breakpoint> bps;
  std::vector<double> sums(lifted.size(), 0.0);
  const double t_start = -1e12;
  for (std::size_t j = 0; j < lifted.size(); ++j) {
    const auto& L = lifted[j];
    for (std::size_t i = 0; i < L.w.size(); ++i) {
      double alpha = 0.0, beta = 0.0;
      const double* row = &L.phi[i * L.dim];
      for (std::size_t d = 0; d < L.dim; ++d) {
        alpha += a[d] * row[d];
        beta += dir[d] * row[d];
      }
      if (beta == 0.0) {
        sums[j] += L.w[i] * (alpha > 0.0 ? 1.0 : (alpha < 0.0 ? -1.0 : 0.0));
        continue;
      }
      const double tb = -alpha / beta;
      // value below tb has sign -sign(beta); crossing adds 2 sign(beta) w
      const double s0 = beta > 0.0 ? -1.0 : 1.0;
      sums[j] += L.w[i] * s0;
      bps.push_back({tb, static_cast<int>(j), 2.0 * (beta > 0.0 ? 1.0 : -1.0) * L.w[i]});
    }
  }
  std::sort(bps.begin(), bps.end(), [](const Breakpoint& x, const Breakpoint& y) { return x.t < y.t; });
  auto objective = [&]() {
    double m = 0.0;
    for (std::size_t j = 0; j < lifted.size(); ++j)
      m = std::max(m, std::fabs(sums[j]) / lifted[j].total);
    return m;
  };
  double best = objective();
  double best_t = t_start;
  for (std::size_t b = 0; b < bps.size(); ++b) {
    sums[static_cast<std::size_t>(bps[b].piece)] += bps[b].delta;
    // evaluate on the open interval after this breakpoint
    const double next = (b + 1 < bps.size()) ? bps[b + 1].t : bps[b].t + 1.0;
    if (next <= bps[b].t) continue;  // coincident breakpoints: fold updates first
    const double obj = objective();
    if (obj < best - 1e-15) {
      best = obj;
      best_t = 0.5 * (bps[b].t + next);
    }
  }
  if (best_obj_out) *best_obj_out = best;
  return best_t;
}

}  // namespace ham_detail

struct BisectOptions {
  std::uint64_t seed = 0;
  int restarts = 10;
  int descent_stages = 6;
  int descent_iters = 40;
  int polish_iters = 240;
  double eps_bisect = 0.02;
};

struct BisectResult {
  PolynomialND polynomial;
  std::vector<double> discrepancies;  // achieved per piece (recomputed)
  double max_discrepancy = 1.0;
};

// Polynomial ham sandwich by optimization: lift points through the degree-D
// monomial (Veronese) map and search for a linear functional in the lifted
// space, minimizing the max relative discrepancy.  Multi-restart local search
// with a smoothed-sign descent inner loop and sign-flip/jitter polish; the
// winner is selected by (discrepancy, restart index) for determinism.
inline BisectResult ham_sandwich_bisect(const std::vector<WeightedPoints>& pieces, int degree_budget,
                                        const BisectOptions& opts = BisectOptions{}) {
  if (pieces.empty()) throw std::domain_error("ham_sandwich_bisect: no pieces");
  const int n = static_cast<int>(pieces[0].points[0].size());
  const auto exps = multi_indices(n, degree_budget);
  const std::size_t dim = exps.size();
  if (pieces.size() > dim - 1)
    throw std::domain_error("ham_sandwich_bisect: too many pieces for the degree budget");

  // normalize coordinates into [-1,1]^n for conditioning of the lift
  Vec lo(static_cast<std::size_t>(n), 1e300), hi(static_cast<std::size_t>(n), -1e300);
  for (const auto& piece : pieces)
    for (const auto& x : piece.points)
      for (int a = 0; a < n; ++a) {
        lo[static_cast<std::size_t>(a)] = std::min(lo[static_cast<std::size_t>(a)], x[static_cast<std::size_t>(a)]);
        hi[static_cast<std::size_t>(a)] = std::max(hi[static_cast<std::size_t>(a)], x[static_cast<std::size_t>(a)]);
      }
  Vec center(static_cast<std::size_t>(n)), scale(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) {
    center[static_cast<std::size_t>(a)] =
        0.5 * (lo[static_cast<std::size_t>(a)] + hi[static_cast<std::size_t>(a)]);
    scale[static_cast<std::size_t>(a)] =
        std::max(1e-12, 0.5 * (hi[static_cast<std::size_t>(a)] - lo[static_cast<std::size_t>(a)]));
  }

  std::vector<ham_detail::LiftedPiece> lifted(pieces.size());
  for (std::size_t j = 0; j < pieces.size(); ++j) {
    auto& L = lifted[j];
    L.dim = dim;
    L.w = pieces[j].weights;
    L.total = pieces[j].total();
    if (!(L.total > 0.0)) throw std::domain_error("ham_sandwich_bisect: empty piece");
    L.phi.resize(pieces[j].size() * dim);
    for (std::size_t i = 0; i < pieces[j].size(); ++i) {
      Vec u(static_cast<std::size_t>(n));
      for (int a = 0; a < n; ++a)
        u[static_cast<std::size_t>(a)] = (pieces[j].points[i][static_cast<std::size_t>(a)] -
                                          center[static_cast<std::size_t>(a)]) /
                                         scale[static_cast<std::size_t>(a)];
      for (std::size_t t = 0; t < dim; ++t) {
        double m = 1.0;
        for (int a = 0; a < n; ++a)
          for (int k = 0; k < exps[t][static_cast<std::size_t>(a)]; ++k)
            m *= u[static_cast<std::size_t>(a)];
        L.phi[i * dim + t] = m;
      }
    }
  }

  auto hard_obj = [&](const std::vector<double>& a) {
    double m = 0.0;
    for (const auto& L : lifted) m = std::max(m, std::fabs(L.signed_imbalance(a)));
    return m;
  };

  auto normalize = [](std::vector<double>& a) {
    double s = 0.0;
    for (double v : a) s += v * v;
    s = std::sqrt(s);
    if (s > 0.0)
      for (double& v : a) v /= s;
  };

  std::vector<double> best_a;
  double best_obj = 1e300;
  Rng root(opts.seed);

  // deterministic axis starts followed by seeded random restarts
  const int axis_starts = static_cast<int>(std::min<std::size_t>(dim, 8));
  for (int restart = 0; restart < axis_starts + opts.restarts; ++restart) {
    std::vector<double> a(dim, 0.0);
    Rng rng = root.derive(restart);
    if (restart < axis_starts) {
      // skip the constant coordinate: a constant polynomial cannot bisect
      a[(restart % (dim - 1)) + 1] = 1.0;
    } else {
      for (auto& v : a) v = rng.gaussian();
      normalize(a);
    }

    // typical lifted magnitude sets the smoothing scale
    double typ = 0.0;
    std::size_t cnt = 0;
    for (const auto& L : lifted)
      for (std::size_t i = 0; i < L.w.size(); ++i) {
        double t = 0.0;
        for (std::size_t d = 0; d < dim; ++d) t += a[d] * L.phi[i * dim + d];
        typ += std::fabs(t);
        ++cnt;
      }
    typ = std::max(1e-9, typ / static_cast<double>(cnt));

    // Gauss-Newton on the smoothed imbalance system d~(a) = 0, annealing the
    // smoothing width; the Jacobian is (#pieces) x dim and the normal system
    // (J J^T) lambda = d~ is tiny.
    const std::size_t np = lifted.size();
    double sigma = typ;
    for (int stage = 0; stage < opts.descent_stages; ++stage, sigma *= 0.4) {
      for (int it = 0; it < opts.descent_iters; ++it) {
        std::vector<double> dvals(np, 0.0);
        std::vector<std::vector<double>> J(np, std::vector<double>(dim, 0.0));
        double loss = 0.0;
        for (std::size_t j = 0; j < np; ++j) {
          dvals[j] = lifted[j].smooth_imbalance(a, sigma, &J[j]);
          loss += dvals[j] * dvals[j];
        }
        if (loss < 1e-24) break;
        // normal matrix M = J J^T, Tikhonov-damped
        std::vector<double> M(np * np, 0.0), rhs(dvals);
        for (std::size_t i = 0; i < np; ++i)
          for (std::size_t j = i; j < np; ++j) {
            double s = 0.0;
            for (std::size_t d = 0; d < dim; ++d) s += J[i][d] * J[j][d];
            M[i * np + j] = M[j * np + i] = s;
          }
        double trace = 0.0;
        for (std::size_t i = 0; i < np; ++i) trace += M[i * np + i];
        const double damp = 1e-10 * std::max(1.0, trace);
        for (std::size_t i = 0; i < np; ++i) M[i * np + i] += damp;
        // Gaussian elimination
        std::vector<double> lambda = rhs;
        {
          std::vector<double> A = M;
          for (std::size_t col = 0; col < np; ++col) {
            std::size_t piv = col;
            for (std::size_t r = col + 1; r < np; ++r)
              if (std::fabs(A[r * np + col]) > std::fabs(A[piv * np + col])) piv = r;
            if (std::fabs(A[piv * np + col]) < 1e-300) continue;
            if (piv != col) {
              for (std::size_t cc = 0; cc < np; ++cc) std::swap(A[col * np + cc], A[piv * np + cc]);
              std::swap(lambda[col], lambda[piv]);
            }
            for (std::size_t r = col + 1; r < np; ++r) {
              const double fct = A[r * np + col] / A[col * np + col];
              if (fct == 0.0) continue;
              for (std::size_t cc = col; cc < np; ++cc) A[r * np + cc] -= fct * A[col * np + cc];
              lambda[r] -= fct * lambda[col];
            }
          }
          for (std::size_t col = np; col-- > 0;) {
            for (std::size_t cc = col + 1; cc < np; ++cc)
              lambda[col] -= A[col * np + cc] * lambda[cc];
            lambda[col] = std::fabs(A[col * np + col]) < 1e-300 ? 0.0
                                                                : lambda[col] / A[col * np + col];
          }
        }
        // step = -J^T lambda, with backtracking on the loss
        std::vector<double> stepv(dim, 0.0);
        for (std::size_t j = 0; j < np; ++j)
          for (std::size_t d = 0; d < dim; ++d) stepv[d] += J[j][d] * lambda[j];
        double step = 1.0;
        bool moved = false;
        for (int bt = 0; bt < 10; ++bt, step *= 0.5) {
          std::vector<double> cand = a;
          for (std::size_t d = 0; d < dim; ++d) cand[d] -= step * stepv[d];
          normalize(cand);
          double closs = 0.0;
          for (const auto& L : lifted) {
            const double dj = L.smooth_imbalance(cand, sigma, nullptr);
            closs += dj * dj;
          }
          if (closs < loss * (1.0 - 1e-12)) {
            a = std::move(cand);
            moved = true;
            break;
          }
        }
        if (!moved) break;
      }
    }

    // exact line minimization cycled over coordinate and random directions
    double cur = hard_obj(a);
    for (int cycle = 0; cycle < 8 && cur > 0.25 * opts.eps_bisect; ++cycle) {
      const double before = cur;
      for (std::size_t dcand = 0; dcand < dim + 8; ++dcand) {
        std::vector<double> dir(dim, 0.0);
        if (dcand < dim) dir[dcand] = 1.0;
        else {
          for (auto& v : dir) v = rng.gaussian();
          normalize(dir);
        }
        double obj1 = 0.0;
        const double t = ham_detail::exact_line_search(lifted, a, dir, &obj1);
        if (obj1 < cur - 1e-15 && std::fabs(t) < 1e11) {
          for (std::size_t d = 0; d < dim; ++d) a[d] += t * dir[d];
          normalize(a);
          cur = hard_obj(a);
        }
      }
      if (cur >= before - 1e-15 && cycle >= 2) break;  // stalled
    }

    // hard polish: coordinate sign flips and Gaussian jitter
    cur = hard_obj(a);
    for (int it = 0; it < opts.polish_iters; ++it) {
      std::vector<double> cand = a;
      if (it % 3 == 0) {
        cand[rng.uniform_index(dim)] *= -1.0;
      } else {
        const double amp = 0.3 * std::pow(0.5, static_cast<double>(it) / 60.0);
        for (auto& v : cand) v += amp * rng.gaussian();
      }
      normalize(cand);
      const double cobj = hard_obj(cand);
      if (cobj < cur) {
        cur = cobj;
        a = std::move(cand);
      }
    }

    if (cur < best_obj) {
      best_obj = cur;
      best_a = a;
      if (best_obj <= 0.5 * opts.eps_bisect) break;
    }
  }

  if (best_obj > opts.eps_bisect)
    throw BisectFailed("achieved discrepancy " + std::to_string(best_obj) + " > eps " +
                       std::to_string(opts.eps_bisect));

  // assemble the polynomial in original coordinates
  PolynomialND pn(n, degree_budget);
  for (std::size_t t = 0; t < dim; ++t) pn.coeffs()[t] = best_a[t];
  PolynomialND raw = pn.compose_affine(center, scale);

  BisectResult res;
  res.polynomial = std::move(raw);
  // independent recomputation of the achieved discrepancies via the raw
  // polynomial (fresh pass over the points)
  res.max_discrepancy = 0.0;
  const double wall_tol = 1e-12 * std::max(1.0, res.polynomial.coefficient_scale());
  for (const auto& piece : pieces) {
    double s = 0.0, on_wall = 0.0;
    for (std::size_t i = 0; i < piece.size(); ++i) {
      const double v = res.polynomial.eval(piece.points[i]);
      if (std::fabs(v) <= wall_tol) on_wall += piece.weights[i];
      s += piece.weights[i] * (v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0));
    }
    // a degenerate "solution" that parks mass on the zero set is not a split
    if (on_wall > opts.eps_bisect * piece.total())
      throw BisectFailed("mass fraction on the zero set = " +
                         std::to_string(on_wall / piece.total()));
    res.discrepancies.push_back(std::fabs(s) / piece.total());
    res.max_discrepancy = std::max(res.max_discrepancy, res.discrepancies.back());
  }
  return res;
}

// Product partition P = prod (Q_s + c_s) with its sign-vector cells.
struct Partition {
  int n = 2;
  int D = 2;
  int S = 0;
  std::vector<PolynomialND> factors;  // Q_s
  std::vector<double> c;              // perturbations c_s
  std::uint64_t seed = 0;
  WeightedPoints measure;             // the partitioned measure
  std::map<std::uint32_t, double> cells;  // sign mask -> weight

  int total_degree() const {
    int d = 0;
    for (const auto& q : factors) d += q.degree();
    return d;
  }

  double factor_value(std::size_t s, const Vec& x) const { return factors[s].eval(x) + c[s]; }

  std::uint32_t sign_mask(const Vec& x) const {
    std::uint32_t m = 0;
    for (std::size_t s = 0; s < factors.size(); ++s)
      if (factor_value(s, x) > 0.0) m |= (1u << s);
    return m;
  }

  double product_value(const Vec& x) const {
    double p = 1.0;
    for (std::size_t s = 0; s < factors.size(); ++s) p *= factor_value(s, x);
    return p;
  }

  void recompute_cells() {
    cells.clear();
    for (std::size_t i = 0; i < measure.size(); ++i)
      cells[sign_mask(measure.points[i])] += measure.weights[i];
  }
};

// S = ceil(n log2 D) rounds of simultaneous bisection; round s bisects the
// 2^{s-1} current sign-classes with one polynomial.
inline Partition partition_measure(const WeightedPoints& mu, int D, std::uint64_t seed = 0,
                                   const BisectOptions& base_opts = BisectOptions{}) {
  if (mu.size() == 0) throw std::domain_error("partition_measure: empty measure");
  if (D < 2) throw std::domain_error("partition_measure: D >= 2");
  const int n = static_cast<int>(mu.points[0].size());
  const int S = static_cast<int>(std::ceil(n * std::log2(static_cast<double>(D))));

  Partition part;
  part.n = n;
  part.D = D;
  part.S = S;
  part.seed = seed;
  part.measure = mu;
  part.c.assign(static_cast<std::size_t>(S), 0.0);

  std::vector<std::uint32_t> masks(mu.size(), 0);
  for (int s = 0; s < S; ++s) {
    // current classes
    std::map<std::uint32_t, WeightedPoints> classes;
    for (std::size_t i = 0; i < mu.size(); ++i)
      classes[masks[i]].push(mu.points[i], mu.weights[i]);
    std::vector<WeightedPoints> pieces;
    pieces.reserve(classes.size());
    for (auto& kv : classes) pieces.push_back(std::move(kv.second));

    // smallest degree whose lifted dimension can bisect all pieces
    int deg = 1;
    while (lifted_dimension(n, deg) < pieces.size() + 1) ++deg;

    BisectOptions opts = base_opts;
    opts.seed = Rng(seed).derive("round").derive(static_cast<std::uint64_t>(s)).next_u64();
    BisectResult res;
    try {
      res = ham_sandwich_bisect(pieces, deg, opts);
    } catch (const BisectFailed& e) {
      throw BisectFailed(std::string(e.what()) + " at round " + std::to_string(s), s);
    }
    part.factors.push_back(res.polynomial);
    for (std::size_t i = 0; i < mu.size(); ++i)
      if (res.polynomial.eval(mu.points[i]) > 0.0) masks[i] |= (1u << s);
  }
  part.recompute_cells();
  return part;
}

// Draws small generic constants c_s; rejects draws that degrade cell balance
// by more than one dyadic factor or leave a factor with vanishing gradient on
// its sampled zero set.
inline Partition perturb_generic(const Partition& p, double magnitude, std::uint64_t seed = 0) {
  Partition q = p;
  if (magnitude == 0.0) return q;
  Rng rng = Rng(seed).derive("perturb");
  for (std::size_t s = 0; s < q.factors.size(); ++s) {
    const double cs = q.factors[s].coefficient_scale();
    if (magnitude > 1e-3 * cs * (1.0 + 1e-12))
      throw std::domain_error("perturb_generic: magnitude above 1e-3 x coefficient scale");
    q.c[s] = p.c[s] + magnitude * rng.uniform(-1.0, 1.0);
  }
  q.recompute_cells();

  // cell weights move by at most one dyadic factor
  for (const auto& kv : p.cells) {
    auto it = q.cells.find(kv.first);
    const double after = it == q.cells.end() ? 0.0 : it->second;
    if (after > 0.0 && kv.second > 0.0) {
      const double r = after / kv.second;
      if (r > 2.0 || r < 0.5)
        throw DegenerateAfterPerturbation("cell weight moved by more than a dyadic factor");
    }
  }

  // gradient check on the sampled zero set of each perturbed factor
  for (std::size_t s = 0; s < q.factors.size(); ++s) {
    // sample zeros by sign change along segments between measure points
    int found = 0;
    double min_grad = 1e300;
    Rng zr = rng.derive(s);
    const std::size_t N = q.measure.size();
    for (int t = 0; t < 400 && found < 40; ++t) {
      const Vec& a = q.measure.points[zr.uniform_index(N)];
      const Vec& b = q.measure.points[zr.uniform_index(N)];
      double fa = q.factor_value(s, a), fb = q.factor_value(s, b);
      if (fa == 0.0 || fa * fb >= 0.0) continue;
      // bisection for the zero crossing
      Vec xlo = a, xhi = b;
      for (int it2 = 0; it2 < 60; ++it2) {
        Vec mid = scale(add(xlo, xhi), 0.5);
        double fm = q.factor_value(s, mid);
        if (fa * fm <= 0.0) xhi = mid;
        else {
          xlo = mid;
          fa = fm;
        }
      }
      Vec z = scale(add(xlo, xhi), 0.5);
      min_grad = std::min(min_grad, norm(q.factors[s].gradient(z)));
      ++found;
    }
    if (found > 0 && min_grad <= 1e-9)
      throw DegenerateAfterPerturbation("factor " + std::to_string(s) +
                                        " has vanishing gradient on its sampled zero set");
  }
  return q;
}

struct LocateResult {
  bool wall = false;
  std::uint32_t mask = 0;
};

// Sign vector of x, or WALL when x lies within estimated distance `wall_width`
// of some Z(Q~_s) (first-order |Q|/|grad Q| distance estimate; conservative).
inline LocateResult locate(const Vec& x, const Partition& p, double wall_width) {
  LocateResult r;
  if (wall_width > 0.0) {
    for (std::size_t s = 0; s < p.factors.size(); ++s) {
      const double v = std::fabs(p.factor_value(s, x));
      const double g = norm(p.factors[s].gradient(x));
      if (v <= wall_width * std::max(g, 1e-12)) {
        r.wall = true;
        return r;
      }
    }
  }
  r.mask = p.sign_mask(x);
  return r;
}

// Number of distinct sign vectors met along a fine sampling of the segment.
inline int line_cell_crossings(const Vec& a, const Vec& b, const Partition& p, int samples = 10000) {
  std::set<std::uint32_t> seen;
  for (int i = 0; i <= samples; ++i) {
    const double t = static_cast<double>(i) / samples;
    Vec x = axpy(t, sub(b, a), a);
    seen.insert(p.sign_mask(x));
  }
  return static_cast<int>(seen.size());
}

struct TubeIncidence {
  std::size_t tube_index = 0;
  std::vector<std::uint32_t> cells;  // distinct non-wall cells entered by the axis
};

// Cells entered by each tube outside the wall, computed by sampling the tube
// axis (if a tube enters a trimmed cell, its axis enters the untrimmed cell).
inline std::vector<TubeIncidence> tube_cell_incidences(const std::vector<Tube>& tubes,
                                                       const Partition& p, double wall_width,
                                                       int samples = 1000) {
  std::vector<TubeIncidence> out;
  for (std::size_t ti = 0; ti < tubes.size(); ++ti) {
    const Tube& t = tubes[ti];
    if (t.radius > wall_width * (1.0 + 1e-12))
      throw std::domain_error("tube_cell_incidences: tube radius must be <= wall width");
    TubeIncidence inc;
    inc.tube_index = ti;
    std::set<std::uint32_t> seen;
    for (int i = 0; i <= samples; ++i) {
      const double xn = -t.ambient_R + 2.0 * t.ambient_R * i / samples;
      Vec x = t.axis_point(xn);
      if (norm(x) > t.ambient_R) continue;
      auto loc = locate(x, p, wall_width);
      if (!loc.wall) seen.insert(loc.mask);
    }
    inc.cells.assign(seen.begin(), seen.end());
    out.push_back(std::move(inc));
  }
  return out;
}

}  // namespace rlab
