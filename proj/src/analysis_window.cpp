#include "teachsim/analysis/window.hpp"

#include <stdexcept>

namespace teachsim::stats {

model::MapEstimate fit_window_utilities(const agents::EpisodeLog& log, int window,
                                        const model::PriorConfig& prior,
                                        const opt::OptimizerConfig& config) {
  const int trials = static_cast<int>(log.trials.size());
  if (window < 1) throw std::invalid_argument("fit window must be at least 1 trial");
  if (window > trials) throw std::invalid_argument("fit window exceeds trial count");

  model::ChoiceDataset data;
  for (int t = trials - window; t < trials; ++t) {
    const auto& trial = log.trials[static_cast<std::size_t>(t)];
    data.add(trial.board, trial.learner_choice);
  }
  return model::fit_map(data, prior, config);
}

}  // namespace teachsim::stats
