#pragma once

#include <map>

namespace teachsim {

// One trial's two-stage decision: the cluster that was entered plus a
// pick/skip flag for each of that cluster's objects (keyed by object id).
struct ChoiceRecord {
  int trial_index = 0;
  int chosen_cluster = 0;
  std::map<int, bool> picks;

  bool operator==(const ChoiceRecord&) const = default;
};

}  // namespace teachsim
