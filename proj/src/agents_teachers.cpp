#include "teachsim/agents/teachers.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace teachsim::agents {

std::string to_string(const Condition& c) {
  std::string prefix;
  switch (c.communication) {
    case Communication::none: prefix = "solo"; break;
    case Communication::demo: prefix = "demo"; break;
    case Communication::chat: prefix = "chat"; break;
  }
  return prefix + (c.visibility == Visibility::full ? "-full" : "-partial");
}

Condition condition_from_string(const std::string& name) {
  std::string lower;
  lower.reserve(name.size());
  for (char ch : name) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  for (const auto& c : all_conditions())
    if (to_string(c) == lower) return c;
  throw std::invalid_argument("unknown condition: " + name);
}

std::array<Condition, 6> all_conditions() {
  return {Condition{Communication::none, Visibility::full},
          Condition{Communication::none, Visibility::partial},
          Condition{Communication::demo, Visibility::full},
          Condition{Communication::demo, Visibility::partial},
          Condition{Communication::chat, Visibility::full},
          Condition{Communication::chat, Visibility::partial}};
}

ChoiceRecord optimal_choice(const env::TrialBoard& board) {
  int best_cluster = 0;
  int best_total = 0;
  for (int j = 0; j < env::kClusterCount; ++j) {
    int total = 0;
    for (const auto& o : board.cluster(j))
      if (o.value > 0) total += o.value;
    if (total > best_total) {
      best_total = total;
      best_cluster = j;
    }
  }
  ChoiceRecord record;
  record.trial_index = board.trial_index;
  record.chosen_cluster = best_cluster;
  for (const auto& o : board.cluster(best_cluster)) record.picks[o.id] = o.value > 0;
  return record;
}

namespace {

struct RankedCell {
  env::Shape shape;
  env::Color color;
  double midpoint;
  int feature_index;
};

// All mapped cells ordered by |midpoint| descending, ties to the lower
// conjunction feature index.
std::vector<RankedCell> ranked_cells(const env::ValueMap& map) {
  std::vector<RankedCell> cells;
  for (int s = 0; s < env::kShapeCount; ++s) {
    for (int c = 0; c < env::kColorCount; ++c) {
      const auto shape = static_cast<env::Shape>(s);
      const auto color = static_cast<env::Color>(c);
      if (const auto& iv = map.cell(shape, color))
        cells.push_back({shape, color, iv->midpoint(),
                         env::features::conjunction_index(shape, color)});
    }
  }
  std::sort(cells.begin(), cells.end(), [](const RankedCell& a, const RankedCell& b) {
    const double ma = std::abs(a.midpoint), mb = std::abs(b.midpoint);
    if (ma != mb) return ma > mb;
    if (a.midpoint != b.midpoint) return a.midpoint > b.midpoint;  // positive first
    return a.feature_index < b.feature_index;
  });
  return cells;
}

std::vector<int> trajectory_object_ids(const env::TrialBoard& board,
                                       const ChoiceRecord& last) {
  std::vector<int> picked, visited;
  for (const auto& o : board.cluster(last.chosen_cluster)) {
    visited.push_back(o.id);
    const auto it = last.picks.find(o.id);
    if (it != last.picks.end() && it->second) picked.push_back(o.id);
  }
  return picked.empty() ? visited : picked;
}

}  // namespace

std::vector<FeatureAssertion> chat_teach(const env::TrialBoard& board, Visibility visibility,
                                         const env::ValueMap& map,
                                         const ChoiceRecord* learner_last, int budget,
                                         int rank_offset) {
  if (budget < 1) throw std::invalid_argument("chat teachers must send at least one message");
  std::vector<FeatureAssertion> out;

  if (visibility == Visibility::full) {
    const auto cells = ranked_cells(map);
    if (cells.empty()) return out;
    for (int k = 0; k < budget; ++k) {
      const auto& cell = cells[static_cast<std::size_t>((rank_offset + k) % cells.size())];
      FeatureAssertion a;
      a.scope = FeatureAssertion::Scope::feature;
      a.feature_index = cell.feature_index;
      a.asserted_value = cell.midpoint;
      out.push_back(a);
    }
    return out;
  }

  if (learner_last == nullptr) return out;
  for (int id : trajectory_object_ids(board, *learner_last)) {
    if (static_cast<int>(out.size()) >= budget) break;
    FeatureAssertion a;
    a.scope = FeatureAssertion::Scope::object;
    a.object_id = id;
    a.asserted_value = board.find(id)->value;
    out.push_back(a);
  }
  return out;
}

ChatTeacher::ChatTeacher(Visibility visibility, env::ValueMap map, int budget)
    : visibility_(visibility), map_(std::move(map)), budget_(budget),
      ranked_cell_count_(static_cast<int>(ranked_cells(map_).size())) {
  if (budget < 1) throw std::invalid_argument("chat teachers must send at least one message");
}

std::vector<FeatureAssertion> ChatTeacher::teach(const env::TrialBoard& board,
                                                 const ChoiceRecord* learner_last) {
  if (visibility_ == Visibility::partial)
    return chat_teach(board, visibility_, map_, learner_last, budget_);

  // Lead with the most valuable combination every trial; fill the remaining
  // budget by walking the rest of the ranked list across trials.
  auto out = chat_teach(board, visibility_, map_, learner_last, 1);
  if (budget_ > 1 && ranked_cell_count_ > 1) {
    auto rest = chat_teach(board, visibility_, map_, learner_last, budget_ - 1,
                           1 + cursor_ % (ranked_cell_count_ - 1));
    cursor_ = (cursor_ + budget_ - 1) % (ranked_cell_count_ - 1);
    out.insert(out.end(), rest.begin(), rest.end());
  }
  return out;
}

namespace {

const char* ordinal(int k) {
  switch (k) {
    case 0: return "first";
    case 1: return "second";
    case 2: return "third";
    case 3: return "fourth";
    default: return "fifth";
  }
}

std::string format_value(double v) {
  const long rounded = std::lround(v);
  if (std::abs(v - static_cast<double>(rounded)) < 1e-9) return std::to_string(rounded);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

std::string assertion_text(const FeatureAssertion& assertion, const env::TrialBoard& board,
                           const ChoiceRecord* learner_last) {
  if (assertion.scope == FeatureAssertion::Scope::feature)
    return env::features::name(assertion.feature_index) + " worth " +
           format_value(assertion.asserted_value);

  int position = 0;
  if (learner_last != nullptr) {
    const auto ids = trajectory_object_ids(board, *learner_last);
    const auto it = std::find(ids.begin(), ids.end(), assertion.object_id);
    if (it != ids.end()) position = static_cast<int>(it - ids.begin());
  }
  return std::string(ordinal(position)) + " one was " + format_value(assertion.asserted_value);
}

}  // namespace teachsim::agents
