#pragma once

#include "teachsim/agents/dyad.hpp"
#include "teachsim/choicemodel/fit.hpp"

namespace teachsim::stats {

// MAP utility fit over the last `window` trials of an episode log.
model::MapEstimate fit_window_utilities(const agents::EpisodeLog& log, int window,
                                        const model::PriorConfig& prior,
                                        const opt::OptimizerConfig& config);

}  // namespace teachsim::stats
