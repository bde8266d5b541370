#pragma once

#include <cstdint>
#include <vector>

#include "teachsim/kernels/backend.hpp"

namespace teachsim::kern {

// Objects on a board come in at most 16 distinct (color, shape) cells, so a
// full dataset evaluation only needs per-cell quantities recomputed once per
// weight vector. The kernels below consume this table plus a transposed,
// slot-major encoding of the trials.
struct CellTable {
  alignas(32) double weighted_utility[16];  // u * sigma(u)
  alignas(32) double log_pick[16];          // log sigma(u)
  alignas(32) double log_skip[16];          // log(1 - sigma(u))
};

// Trials laid out slot-major for 4-wide processing: entry [slot][t] lives at
// slot * stride + t. Slots 0..19 run cluster-major (cluster = slot / 5).
// chosen_type/pick_flag hold the chosen cluster's five slots; chosen_flag is
// a 1.0/0.0 indicator per (cluster, trial).
struct CompiledChoices {
  int trials = 0;
  int stride = 0;
  std::vector<std::int32_t> slot_type;    // 20 * stride
  std::vector<std::int32_t> chosen_type;  // 5 * stride
  std::vector<double> pick_flag;          // 5 * stride
  std::vector<double> chosen_flag;        // 4 * stride

  void resize(int trial_count);
};

// Sum over trials of: log softmax weight of the chosen cluster plus the
// pick/skip log-probabilities of that cluster's five objects.
double log_likelihood(const CompiledChoices& data, const CellTable& cells);
double log_likelihood_backend(const CompiledChoices& data, const CellTable& cells, Backend b);

double log_likelihood_scalar(const CompiledChoices& data, const CellTable& cells,
                             int first_trial, int last_trial);

#if TEACHSIM_X86
double log_likelihood_avx2(const CompiledChoices& data, const CellTable& cells);

// Vectorized exp/log over 4 doubles, exposed for equivalence tests.
// exp4 flushes to 0 below -708.39 (no subnormal outputs) and returns inf
// above 709.43; log4 requires positive, finite, normal inputs.
void exp4_avx2(const double in[4], double out[4]);
void log4_avx2(const double in[4], double out[4]);
#endif

}  // namespace teachsim::kern
