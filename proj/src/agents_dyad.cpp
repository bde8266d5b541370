#include "teachsim/agents/dyad.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

#include "teachsim/agents/learner.hpp"
#include "teachsim/env/types.hpp"
#include "teachsim/util/rng.hpp"

namespace teachsim::agents {

env::ValueMap AgentConfig::effective_value_map() const {
  return value_map ? *value_map : env::ValueMap::standard(counterbalance);
}

void AgentConfig::validate() const {
  if (trials < 1) throw std::invalid_argument("trials must be at least 1");
  if (!(ridge > 0.0)) throw std::invalid_argument("ridge must be positive");
  if (!(act_temperature > 0.0)) throw std::invalid_argument("temperature must be positive");
  if (chat_budget_full < 1 || chat_budget_partial < 1)
    throw std::invalid_argument("chat budgets must be at least 1");
  if (!(own_score_weight >= 0.0))
    throw std::invalid_argument("own-score weight must be non-negative");
  if (assertion_reliability < 0.0 || assertion_reliability > 1.0)
    throw std::invalid_argument("assertion reliability must lie in [0, 1]");
  if (value_map) value_map->validate();
  generator.validate();
}

EpisodeLog run_dyad(const Condition& condition, std::uint64_t seed, const AgentConfig& config) {
  config.validate();
  const env::ValueMap map = config.effective_value_map();

  EpisodeLog log;
  log.condition = condition;
  log.seed = seed;

  Rng act_rng(mix_seed(seed, "learner-act", 0));
  LearnerBelief belief(config.ridge);
  std::unique_ptr<ChatTeacher> chat;
  if (condition.communication == Communication::chat) {
    const int budget = condition.visibility == Visibility::full ? config.chat_budget_full
                                                                : config.chat_budget_partial;
    chat = std::make_unique<ChatTeacher>(condition.visibility, map, budget);
  }

  const bool plays_optimally =
      condition.communication == Communication::none && condition.visibility == Visibility::full;

  int cumulative = 0;
  for (int t = 0; t < config.trials; ++t) {
    TrialRecord record;
    record.board = env::generate_trial(seed, t, map, config.generator);

    record.learner_choice = plays_optimally
                                ? optimal_choice(record.board)
                                : learner_act(belief, record.board, config.act_temperature, act_rng);
    record.learner_score = env::score_choice(record.board, record.learner_choice);
    cumulative += record.learner_score;
    record.cumulative_score = cumulative;

    if (!plays_optimally)
      update_from_score(belief, record.board, record.learner_choice, record.learner_score,
                        config.own_score_weight);

    switch (condition.communication) {
      case Communication::none:
        break;
      case Communication::demo: {
        record.demo_choice = optimal_choice(record.board);
        update_from_demo(belief, record.board, *record.demo_choice);
        break;
      }
      case Communication::chat: {
        record.assertions = chat->teach(record.board, &record.learner_choice);
        for (auto& a : record.assertions) a.reliability = config.assertion_reliability;
        update_from_assertions(belief, record.board, record.assertions);
        break;
      }
    }
    log.trials.push_back(std::move(record));
  }
  return log;
}

BatchSummary run_condition_batch(const Condition& condition, int n_dyads,
                                 std::uint64_t master_seed, const AgentConfig& config) {
  if (n_dyads < 1) throw std::invalid_argument("batch needs at least one dyad");
  BatchSummary summary;
  summary.condition = condition;
  summary.final_scores.reserve(static_cast<std::size_t>(n_dyads));
  for (int d = 0; d < n_dyads; ++d) {
    const std::uint64_t dyad_seed = mix_seed(master_seed, to_string(condition), static_cast<std::uint64_t>(d));
    summary.final_scores.push_back(run_dyad(condition, dyad_seed, config).final_score());
  }
  double sum = 0.0;
  for (int s : summary.final_scores) sum += s;
  summary.mean = sum / n_dyads;
  if (n_dyads > 1) {
    double ss = 0.0;
    for (int s : summary.final_scores) {
      const double d = s - summary.mean;
      ss += d * d;
    }
    summary.sd = std::sqrt(ss / (n_dyads - 1));
  }
  return summary;
}

}  // namespace teachsim::agents
