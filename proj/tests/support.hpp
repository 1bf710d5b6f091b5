#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "core/chebyshev.hpp"

namespace testing {

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

inline std::vector<double> uniform_vector(std::mt19937_64& g, std::size_t n, double lo = -1.0, double hi = 1.0) {
  std::vector<double> v(n);
  for (double& x : v) x = uniform(g, lo, hi);
  return v;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_abs(const std::vector<double>& a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

// T_k(z) from the trigonometric definition, independent of any recurrence.
inline double chebyshev_t(int k, double z) {
  z = std::clamp(z, -1.0, 1.0);
  return std::cos(k * std::acos(z));
}

}  // namespace testing
