#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace rlab {

// Deterministic, implementation-independent RNG.  A single root seed is
// expanded per module/experiment by labeled derivation, so reruns with the
// same config are bit-identical regardless of platform or thread count.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ^ 0x9e3779b97f4a7c15ull) {
    // warm up so that small seeds decorrelate immediately
    next_u64();
    next_u64();
  }

  static std::uint64_t label_hash(const std::string& label) {
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a
    for (unsigned char c : label) {
      h ^= c;
      h *= 1099511628211ull;
    }
    return h;
  }

  // Derive an independent stream for a named purpose.
  Rng derive(const std::string& label) const {
    return Rng(mix(state_ ^ label_hash(label)));
  }
  Rng derive(std::uint64_t salt) const { return Rng(mix(state_ ^ (salt * 0xd1342543de82ef95ull + 1))); }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix(state_);
  }

  double uniform01() {  // in [0,1)
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  std::uint64_t uniform_index(std::uint64_t n) { return next_u64() % n; }

  int sign() { return (next_u64() & 1ull) ? 1 : -1; }

  double gaussian() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u1 = 0.0;
    while (u1 <= 1e-300) u1 = uniform01();
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(a);
    have_cached_ = true;
    return r * std::cos(a);
  }

  std::vector<double> gaussian_vector(int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& x : v) x = gaussian();
    return v;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {  // splitmix64 finalizer
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
  bool have_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace rlab
