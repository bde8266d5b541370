#pragma once

#include <iosfwd>
#include <vector>

#include "teachsim/choicemodel/model.hpp"
#include "teachsim/env/types.hpp"
#include "teachsim/kernels/likelihood.hpp"

namespace teachsim::model {

struct ChoiceTrial {
  env::TrialBoard board;
  ChoiceRecord choice;
};

// Fit input: (board, choice) pairs. Choices are validated against their
// boards on insertion and on load.
struct ChoiceDataset {
  std::vector<ChoiceTrial> trials;

  void add(env::TrialBoard board, ChoiceRecord choice);
  bool empty() const { return trials.empty(); }
  std::size_t size() const { return trials.size(); }

  // JSON lines, one trial per line: {"trial", "board", "cluster", "picks"}.
  void write_jsonl(std::ostream& out) const;
  static ChoiceDataset read_jsonl(std::istream& in);
};

// Sum of per-trial log-likelihoods plus the log prior.
double log_posterior(std::span<const double> theta, const ChoiceDataset& data,
                     const PriorConfig& prior);

// Kernel-ready slot-major encoding of the dataset.
kern::CompiledChoices compile(const ChoiceDataset& data);

// Same value as summing trial_log_likelihood, evaluated by the active kernel.
double compiled_log_likelihood(const kern::CompiledChoices& compiled,
                               std::span<const double> theta);

}  // namespace teachsim::model
