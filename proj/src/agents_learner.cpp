#include "teachsim/agents/learner.hpp"

#include <stdexcept>

#include "teachsim/choicemodel/sample.hpp"
#include "teachsim/util/linalg.hpp"

namespace teachsim::agents {

LearnerBelief::LearnerBelief(double ridge) : ridge_(ridge) {
  if (!(ridge > 0.0)) throw std::invalid_argument("ridge must be positive");
}

void LearnerBelief::add_row(EvidenceRow row) {
  rows_.push_back(row);
  refit();
}

void LearnerBelief::refit() {
  constexpr int n = env::kFeatureCount;
  std::vector<double> gram(static_cast<std::size_t>(n) * n, 0.0);
  std::vector<double> rhs(n, 0.0);
  for (const auto& row : rows_) {
    const double w = row.weight;
    if (w <= 0.0) continue;
    for (int i = 0; i < n; ++i) {
      const double xi = row.x[static_cast<std::size_t>(i)];
      if (xi == 0.0) continue;
      rhs[static_cast<std::size_t>(i)] += w * xi * row.y;
      for (int j = 0; j < n; ++j)
        gram[static_cast<std::size_t>(i) * n + j] += w * xi * row.x[static_cast<std::size_t>(j)];
    }
  }
  for (int i = 0; i < n; ++i) gram[static_cast<std::size_t>(i) * n + i] += ridge_;
  if (cholesky_factor(gram, n) != -1)
    throw std::logic_error("ridge system unexpectedly singular");
  cholesky_solve(gram, n, rhs);
  std::copy(rhs.begin(), rhs.end(), theta_hat_.begin());
}

ChoiceRecord learner_act(const LearnerBelief& belief, const env::TrialBoard& board,
                         double temperature, Rng& rng) {
  if (!(temperature > 0.0)) throw std::invalid_argument("temperature must be positive");
  model::UtilityWeights scaled = belief.theta_hat();
  for (double& v : scaled) v /= temperature;
  return model::sample_choice(scaled, board, rng);
}

void update_from_score(LearnerBelief& belief, const env::TrialBoard& board,
                       const ChoiceRecord& picks, double net_score, double weight) {
  env::validate_choice(board, picks);
  EvidenceRow row;
  row.kind = EvidenceKind::own_score;
  row.weight = weight;
  row.y = net_score;
  for (const auto& o : board.cluster(picks.chosen_cluster)) {
    if (!picks.picks.at(o.id)) continue;
    const auto phi = env::featurize(o);
    for (int i = 0; i < env::kFeatureCount; ++i) row.x[static_cast<std::size_t>(i)] += phi[static_cast<std::size_t>(i)];
  }
  belief.add_row(row);
}

void update_from_demo(LearnerBelief& belief, const env::TrialBoard& board,
                      const ChoiceRecord& demo, bool feature_visibility) {
  if (!feature_visibility) return;  // ablation hook; learners always see features
  env::validate_choice(board, demo);
  EvidenceRow row;
  row.kind = EvidenceKind::demo;
  for (const auto& o : board.cluster(demo.chosen_cluster)) {
    if (!demo.picks.at(o.id)) continue;
    row.y += o.value;
    const auto phi = env::featurize(o);
    for (int i = 0; i < env::kFeatureCount; ++i) row.x[static_cast<std::size_t>(i)] += phi[static_cast<std::size_t>(i)];
  }
  belief.add_row(row);
}

void update_from_assertions(LearnerBelief& belief, const env::TrialBoard& board,
                            std::span<const FeatureAssertion> assertions) {
  for (const auto& a : assertions) {
    EvidenceRow row;
    row.kind = EvidenceKind::assertion;
    row.weight = a.reliability;
    row.y = a.asserted_value;
    if (a.scope == FeatureAssertion::Scope::feature) {
      if (a.feature_index < 0 || a.feature_index >= env::kFeatureCount) {
        belief.note_ignored_assertion();
        continue;
      }
      row.x[static_cast<std::size_t>(a.feature_index)] = 1.0;
    } else {
      const env::GameObject* o = board.find(a.object_id);
      if (o == nullptr) {
        belief.note_ignored_assertion();
        continue;
      }
      row.x = env::featurize(*o);
    }
    belief.add_row(row);
  }
}

}  // namespace teachsim::agents
