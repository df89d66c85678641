#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "rlab/geometry.hpp"

namespace rlab {

// Dense polynomial on R^n with real coefficients indexed by multi-indices
// |alpha| <= degree, in graded lexicographic order.

inline std::vector<std::vector<int>> multi_indices(int n, int degree) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(static_cast<std::size_t>(n), 0);
  // enumerate by total degree
  for (int total = 0; total <= degree; ++total) {
    // odometer over compositions of `total`
    std::function<void(int, int)> rec = [&](int pos, int remaining) {
      if (pos == n - 1) {
        cur[static_cast<std::size_t>(pos)] = remaining;
        out.push_back(cur);
        return;
      }
      for (int v = remaining; v >= 0; --v) {
        cur[static_cast<std::size_t>(pos)] = v;
        rec(pos + 1, remaining - v);
      }
    };
    rec(0, total);
  }
  return out;
}

class PolynomialND {
 public:
  PolynomialND() = default;
  PolynomialND(int n, int degree)
      : n_(n), degree_(degree), exponents_(multi_indices(n, degree)),
        coeffs_(exponents_.size(), 0.0) {}

  int n() const { return n_; }
  int degree() const { return degree_; }
  const std::vector<std::vector<int>>& exponents() const { return exponents_; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  std::vector<double>& coeffs() { return coeffs_; }

  std::size_t term_count() const { return coeffs_.size(); }

  static PolynomialND coordinate(int n, int var) {
    PolynomialND p(n, 1);
    for (std::size_t t = 0; t < p.exponents_.size(); ++t)
      if (p.exponents_[t][static_cast<std::size_t>(var)] == 1) p.coeffs_[t] = 1.0;
    return p;
  }
  static PolynomialND constant(int n, double c) {
    PolynomialND p(n, 0);
    p.coeffs_[0] = c;
    return p;
  }

  double eval(const Vec& x) const {
    double s = 0.0;
    for (std::size_t t = 0; t < coeffs_.size(); ++t) {
      if (coeffs_[t] == 0.0) continue;
      double m = coeffs_[t];
      const auto& e = exponents_[t];
      for (int a = 0; a < n_; ++a)
        for (int k = 0; k < e[static_cast<std::size_t>(a)]; ++k) m *= x[static_cast<std::size_t>(a)];
      s += m;
    }
    return s;
  }

  Vec gradient(const Vec& x) const {
    Vec g(static_cast<std::size_t>(n_), 0.0);
    for (std::size_t t = 0; t < coeffs_.size(); ++t) {
      if (coeffs_[t] == 0.0) continue;
      const auto& e = exponents_[t];
      for (int a = 0; a < n_; ++a) {
        const int ea = e[static_cast<std::size_t>(a)];
        if (ea == 0) continue;
        double m = coeffs_[t] * ea;
        for (int b = 0; b < n_; ++b) {
          const int eb = e[static_cast<std::size_t>(b)] - (b == a ? 1 : 0);
          for (int k = 0; k < eb; ++k) m *= x[static_cast<std::size_t>(b)];
        }
        g[static_cast<std::size_t>(a)] += m;
      }
    }
    return g;
  }

  PolynomialND& operator+=(const PolynomialND& o) {
    if (o.degree_ > degree_) throw std::domain_error("PolynomialND: degree mismatch in +=");
    // exponent orders agree on the common prefix only if degrees match; add by lookup
    for (std::size_t t = 0; t < o.coeffs_.size(); ++t) {
      if (o.coeffs_[t] == 0.0) continue;
      coeffs_[index_of(o.exponents_[t])] += o.coeffs_[t];
    }
    return *this;
  }
  PolynomialND& operator*=(double c) {
    for (auto& v : coeffs_) v *= c;
    return *this;
  }
  // adds constant in place
  PolynomialND shifted(double c) const {
    PolynomialND p = *this;
    p.coeffs_[0] += c;
    return p;
  }

  double coefficient_scale() const {
    double m = 0.0;
    for (double c : coeffs_) m = std::max(m, std::fabs(c));
    return m;
  }

  std::size_t index_of(const std::vector<int>& e) const {
    for (std::size_t t = 0; t < exponents_.size(); ++t)
      if (exponents_[t] == e) return t;
    throw std::domain_error("PolynomialND: exponent not found");
  }

  // P((x - c) / s) expanded into raw coefficients (same degree).
  PolynomialND compose_affine(const Vec& center, const Vec& scale) const {
    PolynomialND out(n_, degree_);
    // expand one source term at a time
    for (std::size_t t = 0; t < coeffs_.size(); ++t) {
      if (coeffs_[t] == 0.0) continue;
      // per-axis binomial tables: ((x_a - c_a)/s_a)^{e_a} = sum_k B_a[k] x_a^k
      std::vector<std::vector<double>> tables(static_cast<std::size_t>(n_));
      for (int a = 0; a < n_; ++a) {
        const int ea = exponents_[t][static_cast<std::size_t>(a)];
        std::vector<double> B(static_cast<std::size_t>(ea) + 1, 0.0);
        // binomial expansion of (x - c)^ea / s^ea
        double spow = std::pow(scale[static_cast<std::size_t>(a)], ea);
        for (int k = 0; k <= ea; ++k) {
          double bin = 1.0;
          for (int i = 0; i < k; ++i) bin = bin * (ea - i) / (i + 1);
          B[static_cast<std::size_t>(k)] =
              bin * std::pow(-center[static_cast<std::size_t>(a)], ea - k) / spow;
        }
        tables[static_cast<std::size_t>(a)] = std::move(B);
      }
      // tensor accumulate
      std::vector<int> kk(static_cast<std::size_t>(n_), 0);
      for (;;) {
        double m = coeffs_[t];
        for (int a = 0; a < n_; ++a)
          m *= tables[static_cast<std::size_t>(a)][static_cast<std::size_t>(kk[static_cast<std::size_t>(a)])];
        if (m != 0.0) out.coeffs_[out.index_of(kk)] += m;
        int a = n_ - 1;
        for (; a >= 0; --a) {
          const int ea = exponents_[t][static_cast<std::size_t>(a)];
          if (++kk[static_cast<std::size_t>(a)] <= ea) break;
          kk[static_cast<std::size_t>(a)] = 0;
        }
        if (a < 0) break;
      }
    }
    return out;
  }

 private:
  int n_ = 1;
  int degree_ = 0;
  std::vector<std::vector<int>> exponents_;
  std::vector<double> coeffs_;
};

}  // namespace rlab
