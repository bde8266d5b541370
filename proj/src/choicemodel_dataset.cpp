#include "teachsim/choicemodel/dataset.hpp"

#include <json.hpp>

#include <istream>
#include <ostream>
#include <stdexcept>

#include "teachsim/env/json_io.hpp"

namespace teachsim::model {

using nlohmann::json;

void ChoiceDataset::add(env::TrialBoard board, ChoiceRecord choice) {
  board.validate();
  env::validate_choice(board, choice);
  trials.push_back({std::move(board), std::move(choice)});
}

void ChoiceDataset::write_jsonl(std::ostream& out) const {
  for (const auto& trial : trials) {
    json picks = json::object();
    for (const auto& [id, picked] : trial.choice.picks)
      picks[std::to_string(id)] = picked;
    const json line = {{"trial", trial.choice.trial_index},
                       {"board", env::board_to_json(trial.board)},
                       {"cluster", trial.choice.chosen_cluster},
                       {"picks", std::move(picks)}};
    out << line.dump() << '\n';
  }
}

ChoiceDataset ChoiceDataset::read_jsonl(std::istream& in) {
  ChoiceDataset data;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json j = json::parse(line);
    env::TrialBoard board = env::board_from_json(j.at("board"));
    ChoiceRecord choice;
    choice.trial_index = j.at("trial").get<int>();
    choice.chosen_cluster = j.at("cluster").get<int>();
    for (const auto& [key, value] : j.at("picks").items())
      choice.picks[std::stoi(key)] = value.get<bool>();
    data.add(std::move(board), std::move(choice));
  }
  return data;
}

double log_posterior(std::span<const double> theta, const ChoiceDataset& data,
                     const PriorConfig& prior) {
  double total = log_prior(theta, prior);
  for (const auto& trial : data.trials)
    total += trial_log_likelihood(theta, trial.board, trial.choice);
  return total;
}

kern::CompiledChoices compile(const ChoiceDataset& data) {
  kern::CompiledChoices out;
  out.resize(static_cast<int>(data.trials.size()));
  const int stride = out.stride;
  for (int t = 0; t < out.trials; ++t) {
    const auto& board = data.trials[static_cast<std::size_t>(t)].board;
    const auto& choice = data.trials[static_cast<std::size_t>(t)].choice;
    board.validate();
    env::validate_choice(board, choice);
    for (int slot = 0; slot < env::kBoardSize; ++slot) {
      const auto& o = board.objects[static_cast<std::size_t>(slot)];
      out.slot_type[static_cast<std::size_t>(slot) * stride + t] =
          env::features::cell_index(o.shape, o.color);
    }
    const auto members = board.cluster(choice.chosen_cluster);
    for (int slot = 0; slot < env::kClusterSize; ++slot) {
      const auto& o = members[static_cast<std::size_t>(slot)];
      const std::size_t at = static_cast<std::size_t>(slot) * stride + t;
      out.chosen_type[at] = env::features::cell_index(o.shape, o.color);
      out.pick_flag[at] = choice.picks.at(o.id) ? 1.0 : 0.0;
    }
    out.chosen_flag[static_cast<std::size_t>(choice.chosen_cluster) * stride + t] = 1.0;
  }
  return out;
}

double compiled_log_likelihood(const kern::CompiledChoices& compiled,
                               std::span<const double> theta) {
  return kern::log_likelihood(compiled, make_cell_table(theta));
}

}  // namespace teachsim::model
