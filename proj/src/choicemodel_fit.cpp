#include "teachsim/choicemodel/fit.hpp"

#include "teachsim/choicemodel/sample.hpp"
#include "teachsim/util/rng.hpp"

namespace teachsim::model {

using nlohmann::json;

json MapEstimate::to_json() const {
  return json{{"theta", std::vector<double>(theta_hat.begin(), theta_hat.end())},
              {"log_posterior", log_posterior},
              {"diagnostics",
               {{"iterations", diagnostics.iterations},
                {"restarts", diagnostics.restarts},
                {"converged", diagnostics.converged},
                {"best_start_index", diagnostics.best_start_index},
                {"evaluations", diagnostics.evaluations}}}};
}

MapEstimate fit_map(const ChoiceDataset& data, const PriorConfig& prior,
                    const opt::OptimizerConfig& config) {
  prior.validate();
  config.validate();
  const kern::CompiledChoices compiled = compile(data);

  const opt::Objective objective = [&](std::span<const double> theta) {
    double value = log_prior(theta, prior);
    if (compiled.trials > 0) value += kern::log_likelihood(compiled, make_cell_table(theta));
    return -value;
  };

  std::vector<std::vector<double>> starts;
  starts.emplace_back(env::kFeatureCount, 0.0);
  Rng rng(mix_seed(config.seed, "fit-start", 0));
  for (int s = 0; s < config.restart_count; ++s) {
    std::vector<double> start(env::kFeatureCount);
    for (double& v : start) v = rng.uniform(-1.0, 1.0);
    starts.push_back(std::move(start));
  }

  const opt::MultiStartResult msr = opt::multi_start(objective, starts, config);

  MapEstimate estimate;
  std::copy(msr.best.x_star.begin(), msr.best.x_star.end(), estimate.theta_hat.begin());
  estimate.log_posterior = log_posterior(estimate.theta_hat, data, prior);
  estimate.diagnostics.iterations = msr.best.iterations;
  estimate.diagnostics.restarts = config.restart_count;
  estimate.diagnostics.converged = msr.best.converged;
  estimate.diagnostics.best_start_index = msr.best_start_index;
  estimate.diagnostics.evaluations = msr.total_evaluations;
  return estimate;
}

}  // namespace teachsim::model
