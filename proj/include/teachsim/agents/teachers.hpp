#pragma once

#include <optional>
#include <string>
#include <vector>

#include "teachsim/agents/condition.hpp"
#include "teachsim/env/types.hpp"

namespace teachsim::agents {

// Demonstration policy: enter the cluster whose strictly-positive values sum
// highest (ties to the lowest cluster index) and pick exactly those objects.
ChoiceRecord optimal_choice(const env::TrialBoard& board);

// One chat statement. Full-visibility teachers assert feature values
// (conjunction features, by value impact); partial-visibility teachers
// report the values of specific objects on the learner's last trajectory.
struct FeatureAssertion {
  enum class Scope { feature, object };
  Scope scope = Scope::feature;
  int feature_index = -1;  // feature scope
  int object_id = -1;      // object scope
  double asserted_value = 0.0;
  double reliability = 1.0;

  bool operator==(const FeatureAssertion&) const = default;
};

// Single-trial chat policy. Full visibility emits up to `budget` feature
// assertions ordered by |cell midpoint| (ties to the lower feature index)
// starting at `rank_offset`; partial visibility reports up to `budget`
// object values from the learner's last choice (picked objects first, or the
// whole visited cluster when nothing was picked). Throws if budget < 1.
std::vector<FeatureAssertion> chat_teach(const env::TrialBoard& board, Visibility visibility,
                                         const env::ValueMap& map,
                                         const ChoiceRecord* learner_last, int budget,
                                         int rank_offset = 0);

// Episode-scoped chat teacher: the full-visibility variant walks down the
// ranked cell list across trials (wrapping), so later messages add new
// pieces of the concept.
class ChatTeacher {
 public:
  ChatTeacher(Visibility visibility, env::ValueMap map, int budget);

  std::vector<FeatureAssertion> teach(const env::TrialBoard& board,
                                      const ChoiceRecord* learner_last);

 private:
  Visibility visibility_;
  env::ValueMap map_;
  int budget_;
  int cursor_ = 0;
  int ranked_cell_count_;
};

// Plain-text rendering used for the chat corpus ("pink circle worth 9",
// "first one was -7").
std::string assertion_text(const FeatureAssertion& assertion, const env::TrialBoard& board,
                           const ChoiceRecord* learner_last);

}  // namespace teachsim::agents
