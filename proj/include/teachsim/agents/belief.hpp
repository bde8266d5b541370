#pragma once

#include <array>
#include <vector>

#include "teachsim/choicemodel/model.hpp"

namespace teachsim::agents {

enum class EvidenceKind { own_score, demo, assertion };

struct EvidenceRow {
  std::array<double, env::kFeatureCount> x{};
  double y = 0.0;
  double weight = 1.0;
  EvidenceKind kind = EvidenceKind::own_score;
};

// The learner's running utility estimate: an append-only evidence store
// refit by ridge-regularized weighted least squares after each addition.
class LearnerBelief {
 public:
  explicit LearnerBelief(double ridge = 1.0);

  const model::UtilityWeights& theta_hat() const { return theta_hat_; }
  const std::vector<EvidenceRow>& rows() const { return rows_; }
  double ridge() const { return ridge_; }
  int ignored_assertions() const { return ignored_assertions_; }

  void add_row(EvidenceRow row);
  void note_ignored_assertion() { ++ignored_assertions_; }

  // Closed-form refit: theta = (X'WX + ridge*I)^{-1} X'Wy. The ridge keeps
  // the system solvable for any store.
  void refit();

 private:
  double ridge_;
  std::vector<EvidenceRow> rows_;
  model::UtilityWeights theta_hat_{};
  int ignored_assertions_ = 0;
};

}  // namespace teachsim::agents
