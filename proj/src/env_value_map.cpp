#include <stdexcept>

#include "teachsim/env/types.hpp"

namespace teachsim::env {

std::string to_string(Shape s) {
  switch (s) {
    case Shape::circle: return "circle";
    case Shape::square: return "square";
    case Shape::triangle: return "triangle";
  }
  throw std::invalid_argument("bad shape");
}

std::string to_string(Color c) {
  switch (c) {
    case Color::cyan: return "cyan";
    case Color::white: return "white";
    case Color::yellow: return "yellow";
    case Color::pink: return "pink";
  }
  throw std::invalid_argument("bad color");
}

Shape shape_from_string(const std::string& s) {
  if (s == "circle") return Shape::circle;
  if (s == "square") return Shape::square;
  if (s == "triangle") return Shape::triangle;
  throw std::invalid_argument("unknown shape: " + s);
}

Color color_from_string(const std::string& s) {
  if (s == "cyan") return Color::cyan;
  if (s == "white") return Color::white;
  if (s == "yellow") return Color::yellow;
  if (s == "pink") return Color::pink;
  throw std::invalid_argument("unknown color: " + s);
}

ValueMap ValueMap::standard(bool counterbalance) {
  ValueMap m;
  m.set_cell(Shape::circle, Color::pink, ValueInterval{8, 10});
  m.set_cell(Shape::circle, Color::white, ValueInterval{4, 6});
  m.set_cell(Shape::circle, Color::cyan, ValueInterval{1, 3});
  m.set_cell(Shape::square, Color::yellow, ValueInterval{-10, -8});
  m.set_cell(Shape::square, Color::white, ValueInterval{-6, -4});
  m.set_cell(Shape::square, Color::cyan, ValueInterval{-3, -1});
  for (int c = 0; c < kColorCount; ++c)
    m.set_cell(Shape::triangle, static_cast<Color>(c), ValueInterval{0, 0});
  if (counterbalance) {
    m = m.with_colors_swapped();
    m.counterbalanced_ = true;
  }
  m.validate();
  return m;
}

ValueMap ValueMap::with_colors_swapped() const {
  ValueMap out = *this;
  for (int s = 0; s < kShapeCount; ++s) {
    const auto shape = static_cast<Shape>(s);
    const auto pink = cell(shape, Color::pink);
    const auto yellow = cell(shape, Color::yellow);
    out.set_cell(shape, Color::pink, yellow);
    out.set_cell(shape, Color::yellow, pink);
  }
  out.counterbalanced_ = !counterbalanced_;
  return out;
}

Color ValueMap::highest_value_color() const {
  int best_sum = 0;
  int best_color = -1;
  for (int c = 0; c < kColorCount; ++c) {
    const auto& cell_v = cell(Shape::circle, static_cast<Color>(c));
    if (cell_v && (best_color < 0 || cell_v->midpoint_twice() > best_sum)) {
      best_sum = cell_v->midpoint_twice();
      best_color = c;
    }
  }
  if (best_color < 0) throw std::invalid_argument("value map has no circle cell");
  return static_cast<Color>(best_color);
}

Color ValueMap::lowest_value_color() const {
  int worst_sum = 0;
  int worst_color = -1;
  for (int c = 0; c < kColorCount; ++c) {
    const auto& cell_v = cell(Shape::square, static_cast<Color>(c));
    if (cell_v && (worst_color < 0 || cell_v->midpoint_twice() < worst_sum)) {
      worst_sum = cell_v->midpoint_twice();
      worst_color = c;
    }
  }
  if (worst_color < 0) throw std::invalid_argument("value map has no square cell");
  return static_cast<Color>(worst_color);
}

void ValueMap::validate() const {
  for (int s = 0; s < kShapeCount; ++s) {
    for (int c = 0; c < kColorCount; ++c) {
      const auto& v = grid_[s][c];
      if (!v) continue;
      if (v->lo > v->hi) throw std::invalid_argument("value map interval reversed");
      if (v->lo < -10 || v->hi > 10)
        throw std::invalid_argument("value map interval outside [-10, 10]");
      switch (static_cast<Shape>(s)) {
        case Shape::circle:
          if (v->lo <= 0) throw std::invalid_argument("circle interval must be positive");
          break;
        case Shape::triangle:
          if (v->lo != 0 || v->hi != 0)
            throw std::invalid_argument("triangle interval must be [0, 0]");
          break;
        case Shape::square:
          if (v->hi >= 0) throw std::invalid_argument("square interval must be negative");
          break;
      }
    }
  }
}

namespace features {

std::array<int, 3> active_indices(Shape s, Color c) {
  return {color_index(c), shape_index(s), conjunction_index(s, c)};
}

std::array<double, kFeatureCount> encode(Shape s, Color c) {
  std::array<double, kFeatureCount> out{};
  for (int idx : active_indices(s, c)) out[static_cast<std::size_t>(idx)] = 1.0;
  return out;
}

std::string name(int feature_index) {
  if (feature_index < 0 || feature_index >= kFeatureCount)
    throw std::invalid_argument("feature index out of range");
  if (feature_index < kColorCount) return to_string(static_cast<Color>(feature_index));
  if (feature_index < kColorCount + kShapeCount)
    return to_string(static_cast<Shape>(feature_index - kColorCount));
  const int cell = feature_index - kColorCount - kShapeCount;
  const auto color = static_cast<Color>(cell / kShapeCount);
  const auto shape = static_cast<Shape>(cell % kShapeCount);
  return to_string(color) + "." + to_string(shape);
}

}  // namespace features

std::span<const GameObject> TrialBoard::cluster(int cluster_id) const {
  if (cluster_id < 0 || cluster_id >= kClusterCount)
    throw std::invalid_argument("cluster id out of range");
  return std::span<const GameObject>(objects).subspan(
      static_cast<std::size_t>(cluster_id) * kClusterSize, kClusterSize);
}

const GameObject* TrialBoard::find(int object_id) const {
  for (const auto& o : objects)
    if (o.id == object_id) return &o;
  return nullptr;
}

void TrialBoard::validate() const {
  if (objects.size() != kBoardSize)
    throw std::invalid_argument("board must hold exactly 20 objects");
  std::array<int, kClusterCount> counts{};
  std::array<bool, 1024> seen{};
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const auto& o = objects[i];
    if (o.cluster_id < 0 || o.cluster_id >= kClusterCount)
      throw std::invalid_argument("object cluster id out of range");
    if (o.cluster_id != static_cast<int>(i) / kClusterSize)
      throw std::invalid_argument("objects must be stored cluster-major");
    ++counts[static_cast<std::size_t>(o.cluster_id)];
    if (o.id < 0 || o.id >= static_cast<int>(seen.size()) || seen[static_cast<std::size_t>(o.id)])
      throw std::invalid_argument("object ids must be unique and small");
    seen[static_cast<std::size_t>(o.id)] = true;
  }
  for (int c : counts)
    if (c != kClusterSize) throw std::invalid_argument("each cluster must hold 5 objects");
}

MaskedBoard mask_board(const TrialBoard& board, ViewMask mask) {
  MaskedBoard out;
  out.trial_index = board.trial_index;
  out.objects.reserve(board.objects.size());
  for (const auto& o : board.objects) {
    MaskedObject mo;
    mo.id = o.id;
    mo.cluster_id = o.cluster_id;
    mo.position = o.position;
    if (mask.sees_features()) {
      mo.shape = o.shape;
      mo.color = o.color;
    }
    if (mask.sees_values()) mo.value = o.value;
    out.objects.push_back(mo);
  }
  return out;
}

void validate_choice(const TrialBoard& board, const ChoiceRecord& choice) {
  if (choice.chosen_cluster < 0 || choice.chosen_cluster >= kClusterCount)
    throw std::invalid_argument("chosen cluster out of range");
  const auto members = board.cluster(choice.chosen_cluster);
  if (choice.picks.size() != static_cast<std::size_t>(kClusterSize))
    throw std::invalid_argument("picks must cover exactly the 5 chosen-cluster objects");
  for (const auto& o : members)
    if (!choice.picks.contains(o.id))
      throw std::invalid_argument("picks missing chosen-cluster object");
}

int score_choice(const TrialBoard& board, const ChoiceRecord& choice) {
  validate_choice(board, choice);
  int total = 0;
  for (const auto& o : board.cluster(choice.chosen_cluster))
    if (choice.picks.at(o.id)) total += o.value;
  return total;
}

}  // namespace teachsim::env
