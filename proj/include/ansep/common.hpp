#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace ansep {

using Cx = std::complex<double>;

// Points on the unit circle, one coordinate per particle.
using CircleConfig = std::vector<Cx>;

inline bool on_unit_circle(const CircleConfig& x, double tol = 1e-9) {
  for (const auto& z : x)
    if (std::abs(std::abs(z) - 1.0) > tol) return false;
  return true;
}

// ln n!
inline double log_factorial(int n) { return std::lgamma(double(n) + 1.0); }

inline double factorial_d(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= double(i);
  return f;
}

// Deterministic RNG. std::mt19937_64 is pinned by the standard, but the distribution
// adapters in libstdc++/libc++ differ, so the float conversions are done by
// hand to keep runs bit-identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // uniform in [0, 1)
  double uniform01() { return double(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // standard normal via Box-Muller, one spare cached
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform01(), u2 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    double rad = std::sqrt(-2.0 * std::log(u1));
    double ang = 2.0 * M_PI * u2;
    spare_ = rad * std::sin(ang);
    has_spare_ = true;
    return rad * std::cos(ang);
  }

  Cx unit_circle() {
    double th = 2.0 * M_PI * uniform01();
    return Cx(std::cos(th), std::sin(th));
  }

  CircleConfig circle_config(int n) {
    CircleConfig x(n);
    for (auto& z : x) z = unit_circle();
    return x;
  }

  std::uint64_t raw() { return eng_(); }

 private:
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Stable derivation of sub-seeds (dataset vs init vs trials) from one seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

struct budget_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ansep
