#pragma once

#include <array>
#include <span>

#include "teachsim/env/types.hpp"
#include "teachsim/kernels/likelihood.hpp"

namespace teachsim::model {

using UtilityWeights = std::array<double, env::kFeatureCount>;

struct PriorConfig {
  double lambda = 1.0;  // Laplace scale; larger means stronger shrinkage

  void validate() const;
};

double object_utility(std::span<const double> theta, const env::GameObject& o);

// P(pick) = sigma(utility); the skip alternative carries utility 0.
double object_pick_probability(std::span<const double> theta, const env::GameObject& o);

// Expected utility of a cluster: sum of u * sigma(u) over its objects.
double cluster_utility(std::span<const double> theta, const env::TrialBoard& board,
                       int cluster_id);

// Softmax over the four cluster utilities, max-subtracted for stability.
std::array<double, env::kClusterCount> cluster_choice_probabilities(
    std::span<const double> theta, const env::TrialBoard& board);

// log P(chosen cluster) + sum of pick/skip log-probabilities over the chosen
// cluster's objects. Always <= 0.
double trial_log_likelihood(std::span<const double> theta, const env::TrialBoard& board,
                            const ChoiceRecord& choice);

// Sum over features of log(lambda/2) - lambda * |theta_k|.
double log_prior(std::span<const double> theta, const PriorConfig& prior);

// Per-cell values consumed by the likelihood kernels. Validates theta finite.
kern::CellTable make_cell_table(std::span<const double> theta);

}  // namespace teachsim::model
