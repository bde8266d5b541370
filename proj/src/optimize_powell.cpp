#include "teachsim/optimize/powell.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace teachsim::opt {

namespace {

constexpr double kGolden = 1.618033988749894848;
constexpr double kGoldenSection = 0.381966011250105152;  // 2 - golden ratio
constexpr double kTiny = 1e-10;

double finite_or_inf(double v) {
  return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

struct Line1D {
  const Objective& f;
  std::span<const double> point;
  std::span<const double> direction;
  std::vector<double> scratch;
  long evaluations = 0;

  Line1D(const Objective& fn, std::span<const double> p, std::span<const double> d)
      : f(fn), point(p), direction(d), scratch(p.size()) {}

  double operator()(double t) {
    for (std::size_t i = 0; i < point.size(); ++i)
      scratch[i] = point[i] + t * direction[i];
    ++evaluations;
    return finite_or_inf(f(scratch));
  }
};

}  // namespace

void OptimizerConfig::validate() const {
  if (!(x_tolerance > 0.0) || !(f_tolerance > 0.0))
    throw std::invalid_argument("optimizer tolerances must be positive");
  if (max_iterations < 1 || max_line_evals < 1)
    throw std::invalid_argument("optimizer budgets must be at least 1");
  if (restart_count < 0) throw std::invalid_argument("restart count must be non-negative");
}

LineResult line_minimize(const Objective& f, std::span<const double> point,
                         std::span<const double> direction, const OptimizerConfig& config) {
  config.validate();
  double dir_norm = 0.0;
  for (double d : direction) dir_norm += d * d;
  if (!(dir_norm > 0.0)) throw std::invalid_argument("line direction must be non-zero");

  Line1D line(f, point, direction);
  const long budget = config.max_line_evals;
  const double f0 = line(0.0);

  // Find a descending initial step on either side, shrinking if needed.
  double h = 1.0;
  double fh = line(h);
  double fneg = std::numeric_limits<double>::infinity();
  bool descending = fh < f0;
  if (!descending) {
    fneg = line(-h);
    if (fneg < f0) {
      h = -h;
      fh = fneg;
      descending = true;
    }
  }
  while (!descending && line.evaluations + 2 <= budget && std::abs(h) > config.x_tolerance) {
    h *= 0.25;
    fh = line(h);
    if (fh < f0) {
      descending = true;
      break;
    }
    fneg = line(-h);
    if (fneg < f0) {
      h = -h;
      fh = fneg;
      descending = true;
    }
  }
  if (!descending) return {0.0, f0, line.evaluations};

  // Outward golden-ratio expansion until the function turns back up.
  double a = 0.0;
  double b = h, fb = fh;
  double c = b * (1.0 + kGolden), fc = line(c);
  while (fc < fb) {
    if (line.evaluations >= budget) return {b, fb, line.evaluations};
    a = b;
    b = c;
    fb = fc;
    c = b + kGolden * (b - a);
    fc = line(c);
  }

  // Golden-section refinement on the bracket [a, c] around b.
  double lo = std::min(a, c), hi = std::max(a, c);
  double x1 = lo + kGoldenSection * (hi - lo);
  double x2 = hi - kGoldenSection * (hi - lo);
  double f1 = line(x1), f2 = line(x2);
  double best_t = b, best_f = fb;
  const auto consider = [&](double t, double ft) {
    if (ft < best_f) {
      best_f = ft;
      best_t = t;
    }
  };
  consider(x1, f1);
  consider(x2, f2);
  while (hi - lo > config.x_tolerance * (std::abs(best_t) + 1.0) &&
         line.evaluations < budget) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = lo + kGoldenSection * (hi - lo);
      f1 = line(x1);
      consider(x1, f1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = hi - kGoldenSection * (hi - lo);
      f2 = line(x2);
      consider(x2, f2);
    }
  }
  if (best_f >= f0) return {0.0, f0, line.evaluations};
  return {best_t, best_f, line.evaluations};
}

OptimizationResult minimize_powell(const Objective& f, std::span<const double> x0,
                                   const OptimizerConfig& config) {
  config.validate();
  const std::size_t n = x0.size();
  if (n == 0) throw std::invalid_argument("empty start point");

  OptimizationResult result;
  result.x_star.assign(x0.begin(), x0.end());
  result.f_star = f(result.x_star);
  result.evaluations = 1;
  if (!std::isfinite(result.f_star))
    throw std::domain_error("objective is not finite at the start point");

  // Direction set starts as the coordinate axes.
  std::vector<std::vector<double>> directions(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) directions[i][i] = 1.0;

  std::vector<double> sweep_start(result.x_star);
  std::vector<double> extrapolated(n), net_direction(n);

  for (int sweep = 0; sweep < config.max_iterations; ++sweep) {
    ++result.iterations;
    const double f_before = result.f_star;
    double largest_drop = 0.0;
    std::size_t largest_drop_index = 0;

    for (std::size_t i = 0; i < n; ++i) {
      const double f_prev = result.f_star;
      const LineResult lr = line_minimize(f, result.x_star, directions[i], config);
      result.evaluations += lr.evaluations;
      if (lr.step != 0.0) {
        for (std::size_t k = 0; k < n; ++k) result.x_star[k] += lr.step * directions[i][k];
        result.f_star = lr.f_value;
      }
      if (f_prev - result.f_star > largest_drop) {
        largest_drop = f_prev - result.f_star;
        largest_drop_index = i;
      }
    }

    if (2.0 * std::abs(f_before - result.f_star) <=
        config.f_tolerance * (std::abs(f_before) + std::abs(result.f_star) + kTiny)) {
      result.converged = true;
      break;
    }

    // Powell's acceptance test for replacing the direction of largest
    // decrease with the sweep's net displacement.
    for (std::size_t k = 0; k < n; ++k) {
      extrapolated[k] = 2.0 * result.x_star[k] - sweep_start[k];
      net_direction[k] = result.x_star[k] - sweep_start[k];
      sweep_start[k] = result.x_star[k];
    }
    const double f_extrapolated = finite_or_inf(f(extrapolated));
    ++result.evaluations;
    if (f_extrapolated < f_before) {
      const double d1 = f_before - result.f_star - largest_drop;
      const double d2 = f_before - f_extrapolated;
      const double test = 2.0 * (f_before - 2.0 * result.f_star + f_extrapolated) * d1 * d1 -
                          largest_drop * d2 * d2;
      if (test < 0.0) {
        double norm = 0.0;
        for (double v : net_direction) norm += v * v;
        norm = std::sqrt(norm);
        if (norm > 0.0) {
          for (double& v : net_direction) v /= norm;
          const LineResult lr = line_minimize(f, result.x_star, net_direction, config);
          result.evaluations += lr.evaluations;
          if (lr.step != 0.0) {
            for (std::size_t k = 0; k < n; ++k) {
              result.x_star[k] += lr.step * net_direction[k];
              sweep_start[k] = result.x_star[k];
            }
            result.f_star = lr.f_value;
          }
          directions[largest_drop_index] = net_direction;
        }
      }
    }
  }
  return result;
}

MultiStartResult multi_start(const Objective& f, std::span<const std::vector<double>> starts,
                             const OptimizerConfig& config) {
  if (starts.empty()) throw std::invalid_argument("multi_start requires at least one start");
  MultiStartResult out;
  bool have_best = false;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    try {
      OptimizationResult r = minimize_powell(f, starts[i], config);
      out.total_evaluations += r.evaluations;
      if (!have_best || r.f_star < out.best.f_star) {
        out.best = std::move(r);
        out.best_start_index = static_cast<int>(i);
        have_best = true;
      }
    } catch (const std::exception&) {
      ++out.failed_starts;
    }
  }
  if (!have_best) throw std::runtime_error("all optimization starts failed");
  return out;
}

}  // namespace teachsim::opt
