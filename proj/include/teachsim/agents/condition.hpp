#pragma once

#include <array>
#include <string>

namespace teachsim::agents {

enum class Communication { none, demo, chat };
enum class Visibility { full, partial };

// The six experimental conditions: two solo controls plus the four
// teacher-learner combinations of communication medium and teacher
// visibility.
struct Condition {
  Communication communication = Communication::none;
  Visibility visibility = Visibility::full;

  bool multiplayer() const { return communication != Communication::none; }
  bool operator==(const Condition&) const = default;
};

std::string to_string(const Condition& c);
Condition condition_from_string(const std::string& name);
std::array<Condition, 6> all_conditions();

}  // namespace teachsim::agents
