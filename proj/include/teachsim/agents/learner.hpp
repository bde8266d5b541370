#pragma once

#include <span>

#include "teachsim/agents/belief.hpp"
#include "teachsim/agents/teachers.hpp"
#include "teachsim/util/rng.hpp"

namespace teachsim::agents {

// Samples a choice from the generative model at theta_hat / temperature.
ChoiceRecord learner_act(const LearnerBelief& belief, const env::TrialBoard& board,
                         double temperature, Rng& rng);

// Aggregate credit assignment: one row mapping the summed feature vector of
// the picked objects to the trial's net score.
void update_from_score(LearnerBelief& belief, const env::TrialBoard& board,
                       const ChoiceRecord& picks, double net_score, double weight = 1.0);

// One row per demonstration: summed picked-feature vector -> demo net score.
// feature_visibility is reserved for ablations; learners always see features.
void update_from_demo(LearnerBelief& belief, const env::TrialBoard& board,
                      const ChoiceRecord& demo, bool feature_visibility = true);

// Feature assertions become unit-feature rows; object assertions become
// full-feature rows for the referenced object. Assertions naming unknown
// objects are counted and skipped.
void update_from_assertions(LearnerBelief& belief, const env::TrialBoard& board,
                            std::span<const FeatureAssertion> assertions);

}  // namespace teachsim::agents
