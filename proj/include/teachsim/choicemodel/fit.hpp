#pragma once

#include <json.hpp>

#include "teachsim/choicemodel/dataset.hpp"
#include "teachsim/optimize/powell.hpp"

namespace teachsim::model {

struct MapEstimate {
  UtilityWeights theta_hat{};
  double log_posterior = 0.0;
  struct Diagnostics {
    int iterations = 0;
    int restarts = 0;
    bool converged = false;
    int best_start_index = 0;
    long evaluations = 0;
  } diagnostics;

  nlohmann::json to_json() const;
};

// MAP fit of the utility weights by multi-start Powell minimization of the
// negated log posterior. Starts at zero plus config.restart_count draws from
// uniform [-1, 1]^19 seeded by config.seed; ties go to the lowest start
// index. An empty dataset yields the prior mode. Deterministic for a fixed
// config.
MapEstimate fit_map(const ChoiceDataset& data, const PriorConfig& prior,
                    const opt::OptimizerConfig& config);

}  // namespace teachsim::model
