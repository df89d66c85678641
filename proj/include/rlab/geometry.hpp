#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "rlab/errors.hpp"

namespace rlab {

using Vec = std::vector<double>;

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}
inline double norm2(const Vec& a) { return dot(a, a); }
inline double norm(const Vec& a) { return std::sqrt(norm2(a)); }
inline double dist(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}
inline Vec add(Vec a, const Vec& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}
inline Vec sub(Vec a, const Vec& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}
inline Vec scale(Vec a, double c) {
  for (auto& x : a) x *= c;
  return a;
}
inline Vec axpy(double c, const Vec& x, Vec y) {  // y + c*x
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += c * x[i];
  return y;
}
inline Vec normalized(Vec a) {
  double n = norm(a);
  if (n == 0.0) throw std::domain_error("normalized: zero vector");
  return scale(std::move(a), 1.0 / n);
}

// G(omega) = (-2*omega, 1) / |(-2*omega, 1)| : unit tube direction for the
// frequency point omega in B^{n-1}.
inline Vec direction_of(const Vec& omega) {
  Vec g(omega.size() + 1);
  for (std::size_t i = 0; i < omega.size(); ++i) g[i] = -2.0 * omega[i];
  g[omega.size()] = 1.0;
  return normalized(std::move(g));
}

// xi(omega) = (omega, |omega|^2) : point on the paraboloid.
inline Vec frequency_of(const Vec& omega) {
  Vec xi(omega.size() + 1);
  for (std::size_t i = 0; i < omega.size(); ++i) xi[i] = omega[i];
  xi[omega.size()] = norm2(omega);
  return xi;
}

enum class ScaleTag { fine, coarse };  // fine: radius R^{-1/2}; coarse: radius K^{-1}

struct Cap {
  Vec center;      // in B^{n-1}
  double radius;   // in (0, 1]
  ScaleTag scale_tag = ScaleTag::fine;

  Cap() = default;
  Cap(Vec c, double r, ScaleTag tag = ScaleTag::fine) : center(std::move(c)), radius(r), scale_tag(tag) {
    if (!(radius > 0.0 && radius <= 1.0)) throw std::domain_error("Cap: radius must be in (0,1]");
    // boundary caps of a covering may center just outside the unit ball
    if (norm(center) > 1.0 + 2.0 * radius) throw std::domain_error("Cap: center outside unit ball");
  }

  int ambient_dim() const { return static_cast<int>(center.size()) + 1; }
  Vec direction() const { return direction_of(center); }
};

// Physical tube T_{theta,v}: the set of (x', x_n) in B_R with
// |x' + 2 x_n omega_theta + v| <= radius.
struct Tube {
  Cap cap;
  Vec v;            // translation in R^{n-1}
  double radius;    // R^{1/2+delta}
  double length;    // R
  double ambient_R; // tube lives inside B_{ambient_R}

  Tube() = default;
  Tube(Cap c, Vec v_, double R, double delta)
      : cap(std::move(c)), v(std::move(v_)), radius(std::pow(R, 0.5 + delta)), length(R), ambient_R(R) {}
  Tube(Cap c, Vec v_, double tube_radius, double tube_length, double R)
      : cap(std::move(c)), v(std::move(v_)), radius(tube_radius), length(tube_length), ambient_R(R) {}

  // sheared axis: x' = -v - 2 x_n omega_theta
  Vec axis_point(double xn) const {
    Vec x(cap.center.size() + 1);
    for (std::size_t i = 0; i < cap.center.size(); ++i) x[i] = -v[i] - 2.0 * xn * cap.center[i];
    x[cap.center.size()] = xn;
    return x;
  }

  Vec direction() const { return cap.direction(); }
};

inline bool tube_contains(const Tube& t, const Vec& x) {
  const std::size_t d = t.cap.center.size();
  if (x.size() != d + 1) throw std::domain_error("tube_contains: dimension mismatch");
  if (norm(x) > t.ambient_R * (1.0 + 1e-12)) return false;
  double s = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    double c = x[i] + 2.0 * x[d] * t.cap.center[i] + t.v[i];
    s += c * c;
  }
  return std::sqrt(s) <= t.radius;
}

// Euclidean distance from a point to the tube's axis line (unbounded line).
inline double distance_to_axis(const Tube& t, const Vec& x) {
  Vec g = t.direction();
  Vec p0 = t.axis_point(0.0);
  Vec d = sub(x, p0);
  double along = dot(d, g);
  double s = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    double r = d[i] - along * g[i];
    s += r * r;
  }
  return std::sqrt(s);
}

// --- small dense helpers -------------------------------------------------

// Jacobi eigenvalue iteration for small symmetric matrices (row-major).
inline std::vector<double> symmetric_eigenvalues(std::vector<double> a, int n,
                                                 std::vector<double>* vectors = nullptr) {
  std::vector<double> v;
  if (vectors) {
    v.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i) * n + i] = 1.0;
  }
  auto at = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * n + j]; };
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
    if (off < 1e-30) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (std::fabs(at(p, q)) < 1e-300) continue;
        double theta = (at(q, q) - at(p, p)) / (2.0 * at(p, q));
        double t = (theta >= 0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (int i = 0; i < n; ++i) {
          double aip = at(i, p), aiq = at(i, q);
          at(i, p) = c * aip - s * aiq;
          at(i, q) = s * aip + c * aiq;
        }
        for (int i = 0; i < n; ++i) {
          double api = at(p, i), aqi = at(q, i);
          at(p, i) = c * api - s * aqi;
          at(q, i) = s * api + c * aqi;
        }
        if (vectors) {
          for (int i = 0; i < n; ++i) {
            double vip = v[static_cast<std::size_t>(i) * n + p];
            double viq = v[static_cast<std::size_t>(i) * n + q];
            v[static_cast<std::size_t>(i) * n + p] = c * vip - s * viq;
            v[static_cast<std::size_t>(i) * n + q] = s * vip + c * viq;
          }
        }
      }
    }
  }
  std::vector<double> eig(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) eig[static_cast<std::size_t>(i)] = at(i, i);
  if (vectors) *vectors = v;
  return eig;
}

// Linear subspace of R^n given by an orthonormal basis.
struct Subspace {
  std::vector<Vec> basis;  // orthonormal, each of length n
  int ambient = 0;

  Subspace() = default;
  explicit Subspace(std::vector<Vec> orthonormal_basis) : basis(std::move(orthonormal_basis)) {
    if (basis.empty()) throw std::domain_error("Subspace: empty basis");
    ambient = static_cast<int>(basis[0].size());
    for (std::size_t i = 0; i < basis.size(); ++i) {
      if (std::fabs(norm(basis[i]) - 1.0) > 1e-12) throw std::domain_error("Subspace: basis not unit");
      for (std::size_t j = 0; j < i; ++j)
        if (std::fabs(dot(basis[i], basis[j])) > 1e-12)
          throw std::domain_error("Subspace: basis not orthogonal");
    }
  }

  int dim() const { return static_cast<int>(basis.size()); }

  // Orthogonal projection of x onto the subspace.
  Vec project(const Vec& x) const {
    Vec p(x.size(), 0.0);
    for (const auto& b : basis) p = axpy(dot(x, b), b, std::move(p));
    return p;
  }

  // Builds a subspace from a (possibly dependent) spanning set via modified
  // Gram-Schmidt; vectors below tol are dropped.
  static Subspace span_of(const std::vector<Vec>& spanning, double tol = 1e-10) {
    std::vector<Vec> ortho;
    for (Vec w : spanning) {
      // two Gram-Schmidt passes for numerical safety
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& b : ortho) {
          const double c = dot(w, b);
          w = axpy(-c, b, std::move(w));
        }
      }
      double nw = norm(w);
      if (nw > tol) ortho.push_back(scale(std::move(w), 1.0 / nw));
    }
    if (ortho.empty()) throw std::domain_error("Subspace::span_of: rank zero");
    return Subspace(std::move(ortho));
  }

  // Orthogonal complement within R^n.
  Subspace complement() const {
    std::vector<Vec> cand;
    for (int i = 0; i < ambient; ++i) {
      Vec e(static_cast<std::size_t>(ambient), 0.0);
      e[static_cast<std::size_t>(i)] = 1.0;
      Vec w = sub(e, project(e));
      cand.push_back(std::move(w));
    }
    std::vector<Vec> ortho;
    for (Vec w : cand) {
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& b : ortho) {
          const double c = dot(w, b);
          w = axpy(-c, b, std::move(w));
        }
      }
      double nw = norm(w);
      if (nw > 1e-10) ortho.push_back(scale(std::move(w), 1.0 / nw));
    }
    if (static_cast<int>(ortho.size()) != ambient - dim())
      throw std::runtime_error("Subspace::complement: rank mismatch");
    return Subspace(std::move(ortho));
  }
};

// Angle between a unit vector and a subspace: arccos |proj_V g|, in [0, pi/2].
inline double angle_to_subspace(const Vec& g, const Subspace& V) {
  double p = norm(V.project(g)) / norm(g);
  p = std::clamp(p, 0.0, 1.0);
  return std::acos(p);
}

inline double angle_between_vectors(const Vec& a, const Vec& b) {
  double c = dot(a, b) / (norm(a) * norm(b));
  return std::acos(std::clamp(std::fabs(c), 0.0, 1.0));  // line angle, in [0, pi/2]
}

// Largest principal angle between two subspaces of equal dimension:
// arccos(sigma_min of the cross-Gram matrix).
inline double largest_principal_angle(const Subspace& U, const Subspace& V) {
  if (U.dim() != V.dim()) throw std::domain_error("largest_principal_angle: dim mismatch");
  const int d = U.dim();
  std::vector<double> g(static_cast<std::size_t>(d) * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g[static_cast<std::size_t>(i) * d + j] = dot(U.basis[i], V.basis[j]);
  // singular values of g = sqrt(eigenvalues of g^T g)
  std::vector<double> gtg(static_cast<std::size_t>(d) * d, 0.0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      double s = 0.0;
      for (int k = 0; k < d; ++k)
        s += g[static_cast<std::size_t>(k) * d + i] * g[static_cast<std::size_t>(k) * d + j];
      gtg[static_cast<std::size_t>(i) * d + j] = s;
    }
  auto eig = symmetric_eigenvalues(std::move(gtg), d);
  double smin2 = *std::min_element(eig.begin(), eig.end());
  double smin = std::sqrt(std::max(0.0, smin2));
  return std::acos(std::clamp(smin, 0.0, 1.0));
}

// --- parameter hierarchy --------------------------------------------------

// delta << delta_{n-1} << ... << delta_0 << eps, realized by the power
// schedule delta_m = eps^{2m+2}, delta = eps^{2n+2}.
struct DeltaHierarchy {
  double epsilon = 0.0;
  std::vector<double> delta_m;  // delta_0 ... delta_{n-1}
  double delta = 0.0;

  // Ordering plus the relation delta_m < eps * delta_{m-1}.
  bool valid() const {
    if (!(epsilon > 0.0) || delta_m.empty()) return false;
    if (!(delta_m.front() < epsilon)) return false;
    for (std::size_t m = 1; m < delta_m.size(); ++m)
      if (!(delta_m[m] < epsilon * delta_m[m - 1])) return false;
    return delta < delta_m.back() && delta > 0.0;
  }

  // Strengthened separation delta_m < eps * delta_{m-1} / 10; holds for the
  // power schedule whenever eps < 0.1.
  bool strongly_separated() const {
    if (!valid()) return false;
    if (!(delta_m.front() < epsilon / 10.0)) return false;
    for (std::size_t m = 1; m < delta_m.size(); ++m)
      if (!(delta_m[m] < epsilon * delta_m[m - 1] / 10.0)) return false;
    return true;
  }
};

inline DeltaHierarchy build_delta_hierarchy(double eps, int n) {
  if (!(eps > 0.0 && eps < 0.5)) throw std::domain_error("build_delta_hierarchy: need 0 < eps < 1/2");
  if (n < 1) throw std::domain_error("build_delta_hierarchy: need n >= 1");
  DeltaHierarchy h;
  h.epsilon = eps;
  for (int m = 0; m < n; ++m) h.delta_m.push_back(std::pow(eps, 2.0 * m + 2.0));
  h.delta = std::pow(eps, 2.0 * n + 2.0);
  if (!h.valid()) throw std::domain_error("build_delta_hierarchy: schedule failed validation");
  return h;
}

}  // namespace rlab
