#include <json.hpp>

#include <istream>
#include <ostream>
#include <stdexcept>

#include "teachsim/agents/dyad.hpp"
#include "teachsim/env/json_io.hpp"

namespace teachsim::agents {

using nlohmann::json;

namespace {

json choice_to_json(const ChoiceRecord& c) {
  json picks = json::object();
  for (const auto& [id, picked] : c.picks) picks[std::to_string(id)] = picked;
  return json{{"trial", c.trial_index}, {"cluster", c.chosen_cluster}, {"picks", std::move(picks)}};
}

ChoiceRecord choice_from_json(const json& j) {
  ChoiceRecord c;
  c.trial_index = j.at("trial").get<int>();
  c.chosen_cluster = j.at("cluster").get<int>();
  for (const auto& [key, value] : j.at("picks").items())
    c.picks[std::stoi(key)] = value.get<bool>();
  return c;
}

json assertion_to_json(const FeatureAssertion& a) {
  json j = {{"value", a.asserted_value}, {"reliability", a.reliability}};
  if (a.scope == FeatureAssertion::Scope::feature)
    j["feature"] = a.feature_index;
  else
    j["object"] = a.object_id;
  return j;
}

FeatureAssertion assertion_from_json(const json& j) {
  FeatureAssertion a;
  a.asserted_value = j.at("value").get<double>();
  a.reliability = j.at("reliability").get<double>();
  if (j.contains("feature")) {
    a.scope = FeatureAssertion::Scope::feature;
    a.feature_index = j.at("feature").get<int>();
  } else {
    a.scope = FeatureAssertion::Scope::object;
    a.object_id = j.at("object").get<int>();
  }
  return a;
}

}  // namespace

void EpisodeLog::write_jsonl(std::ostream& out) const {
  const json header = {{"condition", to_string(condition)},
                       {"seed", seed},
                       {"config_hash", config_hash}};
  out << header.dump() << '\n';
  for (const auto& t : trials) {
    json line = {{"board", env::board_to_json(t.board)},
                 {"choice", choice_to_json(t.learner_choice)},
                 {"score", t.learner_score},
                 {"cumulative", t.cumulative_score}};
    if (t.demo_choice) line["demo"] = choice_to_json(*t.demo_choice);
    if (!t.assertions.empty()) {
      json arr = json::array();
      for (const auto& a : t.assertions) arr.push_back(assertion_to_json(a));
      line["assertions"] = std::move(arr);
    }
    out << line.dump() << '\n';
  }
}

EpisodeLog EpisodeLog::read_jsonl(std::istream& in) {
  EpisodeLog log;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("episode log is empty");
  const json header = json::parse(line);
  log.condition = condition_from_string(header.at("condition").get<std::string>());
  log.seed = header.at("seed").get<std::uint64_t>();
  log.config_hash = header.value("config_hash", "");

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json j = json::parse(line);
    TrialRecord t;
    t.board = env::board_from_json(j.at("board"));
    t.learner_choice = choice_from_json(j.at("choice"));
    t.learner_score = j.at("score").get<int>();
    t.cumulative_score = j.at("cumulative").get<int>();
    if (j.contains("demo")) t.demo_choice = choice_from_json(j.at("demo"));
    if (j.contains("assertions"))
      for (const auto& ja : j.at("assertions")) t.assertions.push_back(assertion_from_json(ja));
    log.trials.push_back(std::move(t));
  }
  return log;
}

}  // namespace teachsim::agents
