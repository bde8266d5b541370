#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace teachsim {

// In-place Cholesky factorization of a symmetric positive definite matrix
// (row-major n x n); the lower triangle receives L with A = L L^T. Returns
// the index of the first pivot <= tol, or -1 on success.
inline int cholesky_factor(std::vector<double>& a, int n, double tol = 0.0) {
  for (int j = 0; j < n; ++j) {
    double d = a[static_cast<std::size_t>(j) * n + j];
    for (int k = 0; k < j; ++k) {
      const double l = a[static_cast<std::size_t>(j) * n + k];
      d -= l * l;
    }
    if (!(d > tol)) return j;
    const double ljj = std::sqrt(d);
    a[static_cast<std::size_t>(j) * n + j] = ljj;
    for (int i = j + 1; i < n; ++i) {
      double s = a[static_cast<std::size_t>(i) * n + j];
      for (int k = 0; k < j; ++k)
        s -= a[static_cast<std::size_t>(i) * n + k] * a[static_cast<std::size_t>(j) * n + k];
      a[static_cast<std::size_t>(i) * n + j] = s / ljj;
    }
  }
  return -1;
}

// Solves L L^T x = b given the factor from cholesky_factor; b is overwritten
// with the solution.
inline void cholesky_solve(const std::vector<double>& chol, int n, std::span<double> b) {
  for (int i = 0; i < n; ++i) {
    double s = b[static_cast<std::size_t>(i)];
    for (int k = 0; k < i; ++k) s -= chol[static_cast<std::size_t>(i) * n + k] * b[static_cast<std::size_t>(k)];
    b[static_cast<std::size_t>(i)] = s / chol[static_cast<std::size_t>(i) * n + i];
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = b[static_cast<std::size_t>(i)];
    for (int k = i + 1; k < n; ++k) s -= chol[static_cast<std::size_t>(k) * n + i] * b[static_cast<std::size_t>(k)];
    b[static_cast<std::size_t>(i)] = s / chol[static_cast<std::size_t>(i) * n + i];
  }
}

// Diagonal of (A)^-1 from its Cholesky factor, by solving n unit vectors.
inline std::vector<double> cholesky_inverse_diagonal(const std::vector<double>& chol, int n) {
  std::vector<double> diag(static_cast<std::size_t>(n));
  std::vector<double> e(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    std::fill(e.begin(), e.end(), 0.0);
    e[static_cast<std::size_t>(j)] = 1.0;
    cholesky_solve(chol, n, e);
    diag[static_cast<std::size_t>(j)] = e[static_cast<std::size_t>(j)];
  }
  return diag;
}

}  // namespace teachsim
