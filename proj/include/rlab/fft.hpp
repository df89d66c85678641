#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

namespace rlab {

using cplx = std::complex<double>;

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// In-place iterative radix-2 FFT.  sign = -1: forward (e^{-i...}), +1: inverse
// (unnormalized; caller divides by N).
inline void fft_pow2(std::vector<cplx>& a, int sign) {
  const std::size_t n = a.size();
  if (!is_pow2(n)) throw std::invalid_argument("fft_pow2: size must be a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * 3.141592653589793238462643383279502884 / static_cast<double>(len);
    const cplx wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      cplx w(1.0, 0.0);
      for (std::size_t j = 0; j < len / 2; ++j) {
        cplx u = a[i + j];
        cplx v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

inline void ifft_pow2(std::vector<cplx>& a) {
  fft_pow2(a, +1);
  const double inv = 1.0 / static_cast<double>(a.size());
  for (auto& x : a) x *= inv;
}

// Forward FFT along one axis of a row-major rectangular array.
// dims = extents per axis; all extents must be powers of two.
inline void fft_axis(std::vector<cplx>& data, const std::vector<std::size_t>& dims, std::size_t axis,
                     int sign, bool normalize_inverse) {
  std::size_t total = 1;
  for (auto d : dims) total *= d;
  if (data.size() != total) throw std::invalid_argument("fft_axis: size mismatch");
  const std::size_t n = dims[axis];
  std::size_t stride = 1;
  for (std::size_t a = axis + 1; a < dims.size(); ++a) stride *= dims[a];
  const std::size_t block = stride * n;
  std::vector<cplx> line(n);
  for (std::size_t base = 0; base < total; base += block) {
    for (std::size_t off = 0; off < stride; ++off) {
      for (std::size_t i = 0; i < n; ++i) line[i] = data[base + off + i * stride];
      fft_pow2(line, sign);
      if (sign > 0 && normalize_inverse) {
        const double inv = 1.0 / static_cast<double>(n);
        for (auto& x : line) x *= inv;
      }
      for (std::size_t i = 0; i < n; ++i) data[base + off + i * stride] = line[i];
    }
  }
}

inline void fft_nd(std::vector<cplx>& data, const std::vector<std::size_t>& dims, int sign) {
  for (std::size_t axis = 0; axis < dims.size(); ++axis) fft_axis(data, dims, axis, sign, sign > 0);
}

}  // namespace rlab
