#pragma once

#include <json.hpp>

#include "teachsim/env/types.hpp"

namespace teachsim::env {

nlohmann::json board_to_json(const TrialBoard& board);
TrialBoard board_from_json(const nlohmann::json& j);

// {"counterbalance": bool, "grid": {"circle": {"pink": [8,10], ...}, ...}};
// grid is optional and replaces the standard cells entirely when present.
nlohmann::json value_map_to_json(const ValueMap& map);
ValueMap value_map_from_json(const nlohmann::json& j);

}  // namespace teachsim::env
