#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace teachsim::opt {

struct OptimizerConfig {
  double x_tolerance = 1e-8;   // line-search interval width target
  double f_tolerance = 1e-9;   // relative per-sweep decrease for convergence
  int max_iterations = 200;    // direction-set sweeps
  int max_line_evals = 100;    // function evaluations per line minimization
  int restart_count = 4;       // extra perturbed starts used by multi-start fits
  std::uint64_t seed = 0;

  void validate() const;
};

struct OptimizationResult {
  std::vector<double> x_star;
  double f_star = 0.0;
  int iterations = 0;
  long evaluations = 0;
  bool converged = false;
};

struct MultiStartResult {
  OptimizationResult best;
  int best_start_index = 0;
  int failed_starts = 0;
  long total_evaluations = 0;
};

using Objective = std::function<double(std::span<const double>)>;

struct LineResult {
  double step = 0.0;
  double f_value = 0.0;
  long evaluations = 0;
};

// Bracket a minimum of f along point + t * direction by outward golden-ratio
// expansion (both signs tried), then refine by golden-section search. Never
// moves uphill: if no descending step is found within the budget, step is 0.
LineResult line_minimize(const Objective& f, std::span<const double> point,
                         std::span<const double> direction, const OptimizerConfig& config);

// Powell's conjugate direction method. Sweeps line minimizations over an
// evolving direction set; after each sweep the direction of largest decrease
// may be replaced by the normalized net displacement when the standard
// acceptance test passes. Terminates when
//   2 |f_prev - f_new| <= f_tolerance * (|f_prev| + |f_new| + 1e-10)
// or the sweep budget is exhausted. Non-finite f at the start point throws
// std::domain_error; non-finite values mid-run are treated as +infinity so
// the iterate never moves to them.
OptimizationResult minimize_powell(const Objective& f, std::span<const double> x0,
                                   const OptimizerConfig& config);

// Independent minimizations from several starts; best f_star wins, ties go
// to the lowest start index. A start whose objective throws is recorded as
// failed without aborting the others.
MultiStartResult multi_start(const Objective& f, std::span<const std::vector<double>> starts,
                             const OptimizerConfig& config);

}  // namespace teachsim::opt
