#pragma once

#include <span>
#include <string>
#include <vector>

namespace teachsim::stats {

// Column-major design matrix with named terms.
struct DesignMatrix {
  std::vector<std::string> terms;
  std::vector<std::vector<double>> columns;
  std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
};

// +-0.5 contrast coding of two two-level factors plus their product and an
// intercept of ones. `positive_a` names the level of factor A mapped to
// +0.5 (likewise for B); observations with any other label than exactly two
// distinct levels are rejected.
DesignMatrix contrast_code(std::span<const std::string> factor_a, std::string_view positive_a,
                           std::string_view name_a, std::span<const std::string> factor_b,
                           std::string_view positive_b, std::string_view name_b);

struct RegressionResult {
  std::vector<std::string> terms;
  std::vector<double> coefficients;
  std::vector<double> standard_errors;
  std::vector<double> t_values;
  std::vector<double> p_values;
  int residual_df = 0;
};

// Ordinary least squares via the normal equations. Throws on n <= k and
// names the offending column on rank deficiency. Standard errors use
// sigma^2 (X'X)^-1 with sigma^2 = RSS / (n - k); two-sided p-values come
// from the t distribution with n - k degrees of freedom.
RegressionResult ols_fit(const DesignMatrix& design, std::span<const double> outcome);

struct TTestResult {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;
};

// Two-sided two-sample t test; pooled variance by default, Welch otherwise.
// Degenerate zero-variance inputs give t = 0, p = 1 when the means agree and
// p -> 0 when they differ.
TTestResult t_test_two_sided(std::span<const double> sample_a, std::span<const double> sample_b,
                             bool pooled = true);

struct ChiSquareResult {
  double chi2 = 0.0;
  int df = 0;
  double p = 1.0;
};

// Pearson chi-square test of independence on a contingency table of
// non-negative counts. Throws on zero row/column marginals.
ChiSquareResult chi_square_independence(const std::vector<std::vector<long long>>& table);

}  // namespace teachsim::stats
