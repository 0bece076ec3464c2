#pragma once

// Test-only oracles, deliberately independent of the library's solve paths:
// dense Gauss-Jordan inversion, quadrature for the normal tail, and a
// splitmix64-based parameter fuzzer.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace testutil {

// Dense inverse by Gauss-Jordan with partial pivoting; row-major input.
inline std::vector<double> dense_inverse(std::vector<double> m, std::size_t n) {
  std::vector<double> inv(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) inv[i * n + i] = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(m[r * n + col]) > std::abs(m[piv * n + col])) piv = r;
    if (std::abs(m[piv * n + col]) < 1e-14) throw std::runtime_error("singular");
    if (piv != col)
      for (std::size_t c = 0; c < n; ++c) {
        std::swap(m[piv * n + c], m[col * n + c]);
        std::swap(inv[piv * n + c], inv[col * n + c]);
      }
    const double scale = m[col * n + col];
    for (std::size_t c = 0; c < n; ++c) {
      m[col * n + c] /= scale;
      inv[col * n + c] /= scale;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = m[r * n + col];
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < n; ++c) {
        m[r * n + c] -= f * m[col * n + c];
        inv[r * n + c] -= f * inv[col * n + c];
      }
    }
  }
  return inv;
}

inline std::vector<double> dense_multiply(const std::vector<double>& m,
                                          const std::vector<double>& v, std::size_t n) {
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out[i] += m[i * n + j] * v[j];
  return out;
}

// Adaptive Simpson quadrature of the standard normal density on [u, u+60];
// the remainder beyond is below 1e-300 for the arguments under test.
inline double normal_tail_quadrature(double u) {
  const auto phi = [](double v) {
    return std::exp(-0.5 * v * v) / std::sqrt(2.0 * 3.14159265358979323846);
  };
  const auto simpson = [&](double a, double b) {
    return (b - a) / 6.0 * (phi(a) + 4.0 * phi(0.5 * (a + b)) + phi(b));
  };
  // Recursive adaptive rule, iterative stack to keep it simple.
  struct Seg {
    double a, b, whole;
  };
  std::vector<Seg> stack{{u, u + 60.0, simpson(u, u + 60.0)}};
  double total = 0.0;
  while (!stack.empty()) {
    const Seg s = stack.back();
    stack.pop_back();
    const double mid = 0.5 * (s.a + s.b);
    const double left = simpson(s.a, mid);
    const double right = simpson(mid, s.b);
    if (std::abs(left + right - s.whole) < 1e-14 * (1.0 + std::abs(left + right)) ||
        s.b - s.a < 1e-6) {
      total += left + right + (left + right - s.whole) / 15.0;
    } else {
      stack.push_back({s.a, mid, left});
      stack.push_back({mid, s.b, right});
    }
  }
  return total;
}

// Deterministic fuzzing utility.
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * ((next() >> 11) * 0x1.0p-53);
  }
  std::size_t index(std::size_t lo, std::size_t hi) {  // inclusive
    return lo + static_cast<std::size_t>(next() % (hi - lo + 1));
  }
};

}  // namespace testutil
