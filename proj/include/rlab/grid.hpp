#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rlab/errors.hpp"
#include "rlab/geometry.hpp"

namespace rlab {

using cplx = std::complex<double>;

struct AxisGrid {
  double lo = 0.0;
  double h = 0.0;
  int count = 0;

  double point(int i) const { return lo + h * i; }
  double hi() const { return lo + h * (count - 1); }
  int nearest_index(double x) const {
    int i = static_cast<int>(std::lround((x - lo) / h));
    return std::clamp(i, 0, count - 1);
  }
  bool aligned_with(const AxisGrid& o, double tol = 1e-9) const {
    if (std::fabs(h - o.h) > tol * h) return false;
    double off = (o.lo - lo) / h;
    return std::fabs(off - std::lround(off)) < 1e-6;
  }
};

// Uniform symmetric grid with `count` points covering [-extent, extent].
inline AxisGrid symmetric_axis(double extent, int count) {
  AxisGrid g;
  g.count = count;
  g.h = 2.0 * extent / (count - 1);
  g.lo = -extent;
  return g;
}

// Complex density f sampled on a uniform grid over B^{n-1} (stored on the
// bounding box; an optional mask marks the support).
class DensityFunction {
 public:
  DensityFunction() = default;
  DensityFunction(int n, std::vector<AxisGrid> axes)
      : n_(n), axes_(std::move(axes)) {
    if (static_cast<int>(axes_.size()) != n_ - 1)
      throw std::domain_error("DensityFunction: need n-1 axes");
    for (const auto& a : axes_)
      if (a.count < 2 || !(a.h > 0.0)) throw std::domain_error("DensityFunction: bad axis");
    samples_.assign(total_count(), cplx(0.0, 0.0));
  }

  int n() const { return n_; }
  int dim_omega() const { return n_ - 1; }
  const std::vector<AxisGrid>& axes() const { return axes_; }
  double h_omega() const { return axes_[0].h; }

  std::size_t total_count() const {
    std::size_t t = 1;
    for (const auto& a : axes_) t *= static_cast<std::size_t>(a.count);
    return t;
  }

  const std::vector<cplx>& samples() const { return samples_; }
  std::vector<cplx>& samples() { return samples_; }
  cplx& at(std::size_t flat) { return samples_[flat]; }
  const cplx& at(std::size_t flat) const { return samples_[flat]; }

  Vec omega_at(std::size_t flat) const {
    Vec w(axes_.size());
    for (int a = static_cast<int>(axes_.size()) - 1; a >= 0; --a) {
      const auto c = static_cast<std::size_t>(axes_[static_cast<std::size_t>(a)].count);
      w[static_cast<std::size_t>(a)] = axes_[static_cast<std::size_t>(a)].point(static_cast<int>(flat % c));
      flat /= c;
    }
    return w;
  }

  // Trapezoid quadrature weight of a sample (product of per-axis weights).
  double weight(std::size_t flat) const {
    double w = 1.0;
    for (int a = static_cast<int>(axes_.size()) - 1; a >= 0; --a) {
      const auto& ax = axes_[static_cast<std::size_t>(a)];
      const auto c = static_cast<std::size_t>(ax.count);
      const std::size_t i = flat % c;
      double wa = ax.h;
      if (i == 0 || i + 1 == c) wa *= 0.5;
      w *= wa;
      flat /= c;
    }
    return w;
  }

  double l2_norm() const {
    double s = 0.0;
    for (std::size_t i = 0; i < samples_.size(); ++i) s += weight(i) * std::norm(samples_[i]);
    return std::sqrt(s);
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& v : samples_) m = std::max(m, std::abs(v));
    return m;
  }

  void fill(const std::function<cplx(const Vec&)>& fn) {
    for (std::size_t i = 0; i < samples_.size(); ++i) samples_[i] = fn(omega_at(i));
  }

  DensityFunction& operator*=(cplx c) {
    for (auto& v : samples_) v *= c;
    return *this;
  }

  void add_scaled(const DensityFunction& o, cplx c) {
    require_same_grid(o);
    for (std::size_t i = 0; i < samples_.size(); ++i) samples_[i] += c * o.samples_[i];
  }

  void require_same_grid(const DensityFunction& o) const {
    if (o.n_ != n_ || o.axes_.size() != axes_.size()) throw GridMismatch("dimension");
    for (std::size_t a = 0; a < axes_.size(); ++a) {
      if (o.axes_[a].count != axes_[a].count || std::fabs(o.axes_[a].lo - axes_[a].lo) > 1e-12 ||
          std::fabs(o.axes_[a].h - axes_[a].h) > 1e-15)
        throw GridMismatch("axis " + std::to_string(a));
    }
  }

  // Adds a window (a density on a sub-grid with the same spacing) into this.
  void accumulate_window(const DensityFunction& w) {
    if (w.n_ != n_) throw GridMismatch("dimension");
    std::vector<std::size_t> offs(axes_.size());
    for (std::size_t a = 0; a < axes_.size(); ++a) {
      if (std::fabs(w.axes_[a].h - axes_[a].h) > 1e-15) throw GridMismatch("spacing");
      double off = (w.axes_[a].lo - axes_[a].lo) / axes_[a].h;
      long r = std::lround(off);
      if (std::fabs(off - r) > 1e-6 || r < 0 ||
          r + w.axes_[a].count > axes_[a].count)
        throw GridMismatch("window not aligned inside grid");
      offs[a] = static_cast<std::size_t>(r);
    }
    std::vector<std::size_t> strides(axes_.size(), 1);
    for (int a = static_cast<int>(axes_.size()) - 2; a >= 0; --a)
      strides[static_cast<std::size_t>(a)] =
          strides[static_cast<std::size_t>(a) + 1] * static_cast<std::size_t>(axes_[static_cast<std::size_t>(a) + 1].count);
    const std::size_t wtotal = w.total_count();
    for (std::size_t fi = 0; fi < wtotal; ++fi) {
      std::size_t rem = fi, flat = 0;
      for (int a = static_cast<int>(axes_.size()) - 1; a >= 0; --a) {
        const auto wc = static_cast<std::size_t>(w.axes_[static_cast<std::size_t>(a)].count);
        const std::size_t ia = rem % wc;
        rem /= wc;
        flat += (ia + offs[static_cast<std::size_t>(a)]) * strides[static_cast<std::size_t>(a)];
      }
      samples_[flat] += w.samples_[fi];
    }
  }

 private:
  int n_ = 2;
  std::vector<AxisGrid> axes_;
  std::vector<cplx> samples_;
};

// Values of Ef (or any complex field) on an explicit point set in R^n.
struct SampledField {
  std::vector<Vec> points;
  std::vector<cplx> values;
  double R = 0.0;

  std::size_t size() const { return points.size(); }
};

}  // namespace rlab
