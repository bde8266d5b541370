#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "teachsim/agents/condition.hpp"
#include "teachsim/agents/teachers.hpp"
#include "teachsim/env/generator.hpp"

namespace teachsim::agents {

struct AgentConfig {
  int trials = 10;
  double ridge = 0.4;
  double act_temperature = 2.0;
  // Aggregate own-score rows carry less evidential weight than taught rows:
  // credit assignment over a five-object haul is hard.
  double own_score_weight = 0.03;
  int chat_budget_full = 1;
  int chat_budget_partial = 1;
  double assertion_reliability = 1.0;
  bool counterbalance = false;
  std::optional<env::ValueMap> value_map;  // overrides standard(counterbalance)
  env::GeneratorConfig generator = env::GeneratorConfig::defaults();

  env::ValueMap effective_value_map() const;
  void validate() const;
};

struct TrialRecord {
  env::TrialBoard board;
  ChoiceRecord learner_choice;
  int learner_score = 0;
  std::optional<ChoiceRecord> demo_choice;     // demo conditions only
  std::vector<FeatureAssertion> assertions;    // chat conditions only
  int cumulative_score = 0;
};

struct EpisodeLog {
  Condition condition;
  std::uint64_t seed = 0;
  std::string config_hash;
  std::vector<TrialRecord> trials;

  int final_score() const { return trials.empty() ? 0 : trials.back().cumulative_score; }

  // One JSON header line {condition, seed, config_hash}, then one JSON line
  // per trial.
  void write_jsonl(std::ostream& out) const;
  static EpisodeLog read_jsonl(std::istream& in);
};

// One full episode: per trial the learner acts and scores, then (in
// multiplayer conditions) the teacher teaches and the learner updates.
// Deterministic for a fixed (condition, seed, config).
EpisodeLog run_dyad(const Condition& condition, std::uint64_t seed, const AgentConfig& config);

struct BatchSummary {
  Condition condition;
  std::vector<int> final_scores;  // by dyad index
  double mean = 0.0;
  double sd = 0.0;  // sample SD; 0 when fewer than 2 dyads
};

// Independent dyads with seeds derived from (master seed, condition, index).
BatchSummary run_condition_batch(const Condition& condition, int n_dyads,
                                 std::uint64_t master_seed, const AgentConfig& config);

}  // namespace teachsim::agents
