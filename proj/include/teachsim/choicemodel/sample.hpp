#pragma once

#include "teachsim/choicemodel/model.hpp"
#include "teachsim/util/rng.hpp"

namespace teachsim::model {

// Generative counterpart of the choice model: cluster drawn from the softmax
// probabilities, then each chosen-cluster object picked independently with
// its sigmoid probability.
ChoiceRecord sample_choice(std::span<const double> theta, const env::TrialBoard& board,
                           Rng& rng);

}  // namespace teachsim::model
