#include "teachsim/env/json_io.hpp"

namespace teachsim::env {

using nlohmann::json;

json board_to_json(const TrialBoard& board) {
  json objects = json::array();
  for (const auto& o : board.objects) {
    json jo = {{"id", o.id},
               {"shape", to_string(o.shape)},
               {"color", to_string(o.color)},
               {"value", o.value},
               {"cluster", o.cluster_id}};
    if (o.position) jo["pos"] = {o.position->first, o.position->second};
    objects.push_back(std::move(jo));
  }
  return json{{"trial_index", board.trial_index}, {"objects", std::move(objects)}};
}

json value_map_to_json(const ValueMap& map) {
  json grid = json::object();
  for (int s = 0; s < kShapeCount; ++s) {
    const auto shape = static_cast<Shape>(s);
    json row = json::object();
    for (int c = 0; c < kColorCount; ++c) {
      const auto color = static_cast<Color>(c);
      if (const auto& iv = map.cell(shape, color)) row[to_string(color)] = {iv->lo, iv->hi};
    }
    grid[to_string(shape)] = std::move(row);
  }
  return json{{"counterbalance", map.counterbalanced()}, {"grid", std::move(grid)}};
}

ValueMap value_map_from_json(const json& j) {
  const bool counterbalance = j.value("counterbalance", false);
  if (!j.contains("grid")) return ValueMap::standard(counterbalance);
  // an explicit grid is literal; the flag is bookkeeping only
  ValueMap map = ValueMap::standard(false);
  for (int s = 0; s < kShapeCount; ++s)
    for (int c = 0; c < kColorCount; ++c)
      map.set_cell(static_cast<Shape>(s), static_cast<Color>(c), std::nullopt);
  for (const auto& [shape_name, row] : j.at("grid").items()) {
    const Shape shape = shape_from_string(shape_name);
    for (const auto& [color_name, bounds] : row.items()) {
      const Color color = color_from_string(color_name);
      map.set_cell(shape, color, ValueInterval{bounds.at(0).get<int>(), bounds.at(1).get<int>()});
    }
  }
  map.set_counterbalanced(counterbalance);
  map.validate();
  return map;
}

TrialBoard board_from_json(const json& j) {
  TrialBoard board;
  board.trial_index = j.at("trial_index").get<int>();
  for (const auto& jo : j.at("objects")) {
    GameObject o;
    o.id = jo.at("id").get<int>();
    o.shape = shape_from_string(jo.at("shape").get<std::string>());
    o.color = color_from_string(jo.at("color").get<std::string>());
    o.value = jo.at("value").get<int>();
    o.cluster_id = jo.at("cluster").get<int>();
    if (jo.contains("pos")) {
      const auto& p = jo.at("pos");
      o.position = {p.at(0).get<int>(), p.at(1).get<int>()};
    }
    board.objects.push_back(o);
  }
  board.validate();
  return board;
}

}  // namespace teachsim::env
