#pragma once

#include <algorithm>
#include <cmath>
#include <span>

namespace teachsim {

// log(1 + e^x), overflow-safe for the whole double range.
inline double softplus(double x) {
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

inline double sigmoid(double u) {
  if (u >= 0.0) {
    const double e = std::exp(-u);
    return 1.0 / (1.0 + e);
  }
  const double e = std::exp(u);
  return e / (1.0 + e);
}

// log sigma(u) = -softplus(-u)
inline double log_sigmoid(double u) { return -softplus(-u); }

inline double logsumexp(std::span<const double> v) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : v) m = std::max(m, x);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

}  // namespace teachsim
