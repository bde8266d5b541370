#include <cmath>

#include "teachsim/kernels/likelihood.hpp"

namespace teachsim::kern {

// Reference implementation. The AVX2 kernel must agree with this one to
// floating-point roundoff; keep the arithmetic order simple and fixed.
double log_likelihood_scalar(const CompiledChoices& data, const CellTable& cells,
                             int first_trial, int last_trial) {
  const int stride = data.stride;
  double total = 0.0;
  for (int t = first_trial; t < last_trial; ++t) {
    double v[4] = {0.0, 0.0, 0.0, 0.0};
    for (int slot = 0; slot < 20; ++slot) {
      const std::int32_t cell = data.slot_type[static_cast<std::size_t>(slot) * stride + t];
      v[slot / 5] += cells.weighted_utility[cell];
    }
    const double m = std::max(std::max(v[0], v[1]), std::max(v[2], v[3]));
    const double sum_exp = std::exp(v[0] - m) + std::exp(v[1] - m) +
                           std::exp(v[2] - m) + std::exp(v[3] - m);
    const double lse = m + std::log(sum_exp);

    double chosen_v = 0.0;
    for (int j = 0; j < 4; ++j)
      chosen_v += v[j] * data.chosen_flag[static_cast<std::size_t>(j) * stride + t];
    total += chosen_v - lse;

    for (int slot = 0; slot < 5; ++slot) {
      const std::size_t at = static_cast<std::size_t>(slot) * stride + t;
      const std::int32_t cell = data.chosen_type[at];
      const double pick = data.pick_flag[at];
      const double lp = cells.log_pick[cell];
      const double ls = cells.log_skip[cell];
      total += ls + pick * (lp - ls);
    }
  }
  return total;
}

}  // namespace teachsim::kern
