#include "teachsim/analysis/stats.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "teachsim/analysis/special.hpp"
#include "teachsim/util/linalg.hpp"

namespace teachsim::stats {

namespace {

std::vector<double> code_factor(std::span<const std::string> levels, std::string_view positive,
                                std::string_view name) {
  std::set<std::string> distinct(levels.begin(), levels.end());
  if (distinct.size() != 2)
    throw std::invalid_argument("factor '" + std::string(name) + "' must have exactly 2 levels");
  if (!distinct.contains(std::string(positive)))
    throw std::invalid_argument("factor '" + std::string(name) + "' lacks level '" +
                                std::string(positive) + "'");
  std::vector<double> out;
  out.reserve(levels.size());
  for (const auto& level : levels) out.push_back(level == positive ? 0.5 : -0.5);
  return out;
}

}  // namespace

DesignMatrix contrast_code(std::span<const std::string> factor_a, std::string_view positive_a,
                           std::string_view name_a, std::span<const std::string> factor_b,
                           std::string_view positive_b, std::string_view name_b) {
  if (factor_a.size() != factor_b.size())
    throw std::invalid_argument("contrast factors must have equal length");
  DesignMatrix design;
  design.terms = {"intercept", std::string(name_a), std::string(name_b),
                  std::string(name_a) + ":" + std::string(name_b)};
  design.columns.resize(4);
  design.columns[0].assign(factor_a.size(), 1.0);
  design.columns[1] = code_factor(factor_a, positive_a, name_a);
  design.columns[2] = code_factor(factor_b, positive_b, name_b);
  design.columns[3].resize(factor_a.size());
  for (std::size_t i = 0; i < factor_a.size(); ++i)
    design.columns[3][i] = design.columns[1][i] * design.columns[2][i];
  return design;
}

RegressionResult ols_fit(const DesignMatrix& design, std::span<const double> outcome) {
  const int k = static_cast<int>(design.columns.size());
  const int n = static_cast<int>(outcome.size());
  if (k == 0) throw std::invalid_argument("design matrix has no columns");
  for (const auto& col : design.columns)
    if (col.size() != outcome.size())
      throw std::invalid_argument("design and outcome lengths differ");
  if (n <= k) throw std::invalid_argument("need more observations than columns");

  // Normal equations X'X beta = X'y, solved by Cholesky.
  std::vector<double> gram(static_cast<std::size_t>(k) * k, 0.0);
  std::vector<double> rhs(static_cast<std::size_t>(k), 0.0);
  for (int i = 0; i < k; ++i) {
    for (int j = i; j < k; ++j) {
      double s = 0.0;
      for (int r = 0; r < n; ++r)
        s += design.columns[static_cast<std::size_t>(i)][static_cast<std::size_t>(r)] *
             design.columns[static_cast<std::size_t>(j)][static_cast<std::size_t>(r)];
      gram[static_cast<std::size_t>(i) * k + j] = s;
      gram[static_cast<std::size_t>(j) * k + i] = s;
    }
    double s = 0.0;
    for (int r = 0; r < n; ++r)
      s += design.columns[static_cast<std::size_t>(i)][static_cast<std::size_t>(r)] * outcome[static_cast<std::size_t>(r)];
    rhs[static_cast<std::size_t>(i)] = s;
  }

  double scale = 0.0;
  for (int i = 0; i < k; ++i) scale = std::max(scale, gram[static_cast<std::size_t>(i) * k + i]);
  std::vector<double> chol = gram;
  const int bad = cholesky_factor(chol, k, scale * 1e-12);
  if (bad >= 0) {
    const std::string term = static_cast<std::size_t>(bad) < design.terms.size()
                                 ? design.terms[static_cast<std::size_t>(bad)]
                                 : std::to_string(bad);
    throw std::invalid_argument("design matrix is rank deficient at column '" + term + "'");
  }
  std::vector<double> beta = rhs;
  cholesky_solve(chol, k, beta);

  double rss = 0.0;
  for (int r = 0; r < n; ++r) {
    double fitted = 0.0;
    for (int j = 0; j < k; ++j) fitted += beta[static_cast<std::size_t>(j)] * design.columns[static_cast<std::size_t>(j)][static_cast<std::size_t>(r)];
    const double e = outcome[static_cast<std::size_t>(r)] - fitted;
    rss += e * e;
  }

  RegressionResult result;
  result.terms = design.terms;
  if (result.terms.empty())
    for (int j = 0; j < k; ++j) result.terms.push_back("x" + std::to_string(j));
  result.coefficients = beta;
  result.residual_df = n - k;
  const double sigma2 = rss / result.residual_df;
  const auto inv_diag = cholesky_inverse_diagonal(chol, k);
  result.standard_errors.resize(static_cast<std::size_t>(k));
  result.t_values.resize(static_cast<std::size_t>(k));
  result.p_values.resize(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) {
    const double se = std::sqrt(std::max(0.0, sigma2 * inv_diag[static_cast<std::size_t>(j)]));
    result.standard_errors[static_cast<std::size_t>(j)] = se;
    if (se > 0.0) {
      const double t = beta[static_cast<std::size_t>(j)] / se;
      result.t_values[static_cast<std::size_t>(j)] = t;
      result.p_values[static_cast<std::size_t>(j)] = student_t_two_sided_p(t, result.residual_df);
    } else {
      // noiseless fit: zero coefficients are undetermined, others certain
      const bool zero = beta[static_cast<std::size_t>(j)] == 0.0;
      result.t_values[static_cast<std::size_t>(j)] = zero ? 0.0 : std::copysign(
          std::numeric_limits<double>::infinity(), beta[static_cast<std::size_t>(j)]);
      result.p_values[static_cast<std::size_t>(j)] = zero ? 1.0 : 0.0;
    }
  }
  return result;
}

TTestResult t_test_two_sided(std::span<const double> sample_a, std::span<const double> sample_b,
                             bool pooled) {
  const std::size_t na = sample_a.size(), nb = sample_b.size();
  if (na < 2 || nb < 2) throw std::invalid_argument("each sample needs at least 2 points");

  const auto mean = [](std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  const auto variance = [&](std::span<const double> v, double m) {
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
  };

  const double ma = mean(sample_a), mb = mean(sample_b);
  const double va = variance(sample_a, ma), vb = variance(sample_b, mb);

  TTestResult result;
  double se2, df;
  if (pooled) {
    const double sp2 = ((na - 1) * va + (nb - 1) * vb) / static_cast<double>(na + nb - 2);
    se2 = sp2 * (1.0 / static_cast<double>(na) + 1.0 / static_cast<double>(nb));
    df = static_cast<double>(na + nb - 2);
  } else {
    const double qa = va / static_cast<double>(na), qb = vb / static_cast<double>(nb);
    se2 = qa + qb;
    df = se2 > 0.0 ? (se2 * se2) / (qa * qa / (static_cast<double>(na) - 1.0) +
                                    qb * qb / (static_cast<double>(nb) - 1.0))
                   : static_cast<double>(na + nb - 2);
  }
  result.df = df;
  if (se2 <= 0.0) {
    if (ma == mb) {
      result.t = 0.0;
      result.p = 1.0;
    } else {
      result.t = std::copysign(std::numeric_limits<double>::infinity(), ma - mb);
      result.p = 0.0;
    }
    return result;
  }
  result.t = (ma - mb) / std::sqrt(se2);
  result.p = student_t_two_sided_p(result.t, df);
  return result;
}

ChiSquareResult chi_square_independence(const std::vector<std::vector<long long>>& table) {
  const std::size_t rows = table.size();
  if (rows < 2) throw std::invalid_argument("table needs at least 2 rows");
  const std::size_t cols = table.front().size();
  if (cols < 2) throw std::invalid_argument("table needs at least 2 columns");

  std::vector<double> row_sum(rows, 0.0), col_sum(cols, 0.0);
  double total = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    if (table[r].size() != cols) throw std::invalid_argument("ragged contingency table");
    for (std::size_t c = 0; c < cols; ++c) {
      if (table[r][c] < 0) throw std::invalid_argument("negative count");
      row_sum[r] += static_cast<double>(table[r][c]);
      col_sum[c] += static_cast<double>(table[r][c]);
      total += static_cast<double>(table[r][c]);
    }
  }
  for (double s : row_sum)
    if (s <= 0.0) throw std::invalid_argument("zero row marginal");
  for (double s : col_sum)
    if (s <= 0.0) throw std::invalid_argument("zero column marginal");

  ChiSquareResult result;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const double expected = row_sum[r] * col_sum[c] / total;
      const double diff = static_cast<double>(table[r][c]) - expected;
      result.chi2 += diff * diff / expected;
    }
  }
  result.df = static_cast<int>((rows - 1) * (cols - 1));
  result.p = chi_square_sf(result.chi2, result.df);
  return result;
}

}  // namespace teachsim::stats
