#include "teachsim/analysis/special.hpp"

#include <cmath>
#include <stdexcept>

namespace teachsim::stats {

namespace {

constexpr int kMaxTerms = 200000;
constexpr double kEps = 1e-16;
constexpr double kTinyCf = 1e-300;

// Continued fraction for the incomplete beta function (modified Lentz).
double beta_cf(double a, double b, double x) {
  double c = 1.0;
  double d = 1.0 - (a + b) * x / (a + 1.0);
  if (std::abs(d) < kTinyCf) d = kTinyCf;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m < kMaxTerms; ++m) {
    const double m2 = 2.0 * m;
    double num = m * (b - m) * x / ((a + m2 - 1.0) * (a + m2));
    d = 1.0 + num * d;
    if (std::abs(d) < kTinyCf) d = kTinyCf;
    c = 1.0 + num / c;
    if (std::abs(c) < kTinyCf) c = kTinyCf;
    d = 1.0 / d;
    h *= d * c;
    num = -(a + m) * (a + b + m) * x / ((a + m2) * (a + m2 + 1.0));
    d = 1.0 + num * d;
    if (std::abs(d) < kTinyCf) d = kTinyCf;
    c = 1.0 + num / c;
    if (std::abs(c) < kTinyCf) c = kTinyCf;
    d = 1.0 / d;
    const double mult = d * c;
    h *= mult;
    if (std::abs(mult - 1.0) <= kEps) break;
  }
  return h;
}

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("beta parameters must be positive");
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("beta argument must lie in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double front = std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b));
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double regularized_gamma_p(double a, double x) {
  if (!(a > 0.0)) throw std::invalid_argument("gamma shape must be positive");
  if (!(x >= 0.0)) throw std::invalid_argument("gamma argument must be non-negative");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) {
    // series expansion
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int n = 0; n < kMaxTerms; ++n) {
      ap += 1.0;
      term *= x / ap;
      sum += term;
      if (std::abs(term) < std::abs(sum) * kEps) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
  }
  return 1.0 - regularized_gamma_q(a, x);
}

double regularized_gamma_q(double a, double x) {
  if (!(a > 0.0)) throw std::invalid_argument("gamma shape must be positive");
  if (!(x >= 0.0)) throw std::invalid_argument("gamma argument must be non-negative");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - regularized_gamma_p(a, x);
  // continued fraction (modified Lentz)
  double b = x + 1.0 - a;
  double c = 1.0 / kTinyCf;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxTerms; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTinyCf) d = kTinyCf;
    c = b + an / c;
    if (std::abs(c) < kTinyCf) c = kTinyCf;
    d = 1.0 / d;
    const double mult = d * c;
    h *= mult;
    if (std::abs(mult - 1.0) <= kEps) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double student_t_two_sided_p(double t, double df) {
  if (!(df > 0.0)) throw std::invalid_argument("degrees of freedom must be positive");
  if (std::isinf(t)) return 0.0;
  if (t == 0.0) return 1.0;
  return regularized_incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
}

double chi_square_sf(double x, double df) {
  if (!(df > 0.0)) throw std::invalid_argument("degrees of freedom must be positive");
  return regularized_gamma_q(df / 2.0, x / 2.0);
}

}  // namespace teachsim::stats
