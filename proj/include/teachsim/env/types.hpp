#pragma once

#include <array>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "teachsim/choice.hpp"

namespace teachsim::env {

// Enumerator order matches the canonical feature ordering below.
enum class Shape : int { circle = 0, square = 1, triangle = 2 };
enum class Color : int { cyan = 0, white = 1, yellow = 2, pink = 3 };

inline constexpr int kShapeCount = 3;
inline constexpr int kColorCount = 4;
inline constexpr int kFeatureCount = kColorCount + kShapeCount + kColorCount * kShapeCount;  // 19
inline constexpr int kClusterCount = 4;
inline constexpr int kClusterSize = 5;
inline constexpr int kBoardSize = kClusterCount * kClusterSize;

std::string to_string(Shape s);
std::string to_string(Color c);
Shape shape_from_string(const std::string& s);
Color color_from_string(const std::string& s);

// Inclusive integer point interval.
struct ValueInterval {
  int lo = 0;
  int hi = 0;
  bool operator==(const ValueInterval&) const = default;
  int midpoint_twice() const { return lo + hi; }  // exact, avoids .5 rounding
  double midpoint() const { return 0.5 * (lo + hi); }
};

// (shape, color) -> optional point interval. Circles map to strictly
// positive intervals, triangles to [0,0], squares to strictly negative ones;
// unmapped cells are never generated.
class ValueMap {
 public:
  static ValueMap standard(bool counterbalance);

  const std::optional<ValueInterval>& cell(Shape s, Color c) const {
    return grid_[static_cast<int>(s)][static_cast<int>(c)];
  }
  void set_cell(Shape s, Color c, std::optional<ValueInterval> v) {
    grid_[static_cast<int>(s)][static_cast<int>(c)] = v;
  }

  bool counterbalanced() const { return counterbalanced_; }
  void set_counterbalanced(bool v) { counterbalanced_ = v; }

  // Swaps the pink and yellow assignments across every shape.
  ValueMap with_colors_swapped() const;

  // Color whose circle interval has the highest midpoint / whose square
  // interval has the lowest. Throws if the map has no circle (or square)
  // cell at all.
  Color highest_value_color() const;
  Color lowest_value_color() const;

  // Enforces the sign and bound rules above; throws std::invalid_argument.
  void validate() const;

  bool operator==(const ValueMap&) const = default;

 private:
  std::array<std::array<std::optional<ValueInterval>, kColorCount>, kShapeCount> grid_{};
  bool counterbalanced_ = false;
};

struct GameObject {
  int id = 0;
  Shape shape = Shape::circle;
  Color color = Color::cyan;
  int value = 0;
  int cluster_id = 0;
  std::optional<std::pair<int, int>> position;  // (row, col), log realism only

  bool operator==(const GameObject&) const = default;
};

// One game level: 20 objects in 4 clusters of 5, stored cluster-major.
struct TrialBoard {
  int trial_index = 0;
  std::vector<GameObject> objects;

  std::span<const GameObject> cluster(int cluster_id) const;
  const GameObject* find(int object_id) const;

  // Structural invariants: 20 objects, 4 x 5 clusters, unique ids,
  // cluster-major ordering.
  void validate() const;

  bool operator==(const TrialBoard&) const = default;
};

// Canonical 19-feature binary encoding: indices 0-3 colors (cyan, white,
// yellow, pink), 4-6 shapes (circle, square, triangle), 7-18 color x shape
// conjunctions in color-major order.
namespace features {

inline constexpr int color_index(Color c) { return static_cast<int>(c); }
inline constexpr int shape_index(Shape s) { return kColorCount + static_cast<int>(s); }
inline constexpr int conjunction_index(Shape s, Color c) {
  return kColorCount + kShapeCount + kShapeCount * static_cast<int>(c) + static_cast<int>(s);
}

// The (color, shape) cell id used by the likelihood kernels; equals the
// conjunction index minus 7.
inline constexpr int cell_index(Shape s, Color c) {
  return kShapeCount * static_cast<int>(c) + static_cast<int>(s);
}

std::array<int, 3> active_indices(Shape s, Color c);
std::array<double, kFeatureCount> encode(Shape s, Color c);
std::string name(int feature_index);

}  // namespace features

inline std::array<double, kFeatureCount> featurize(const GameObject& o) {
  return features::encode(o.shape, o.color);
}

enum class Role { learner, teacher_full, teacher_partial, solo_full, solo_partial };

struct ViewMask {
  Role role = Role::learner;

  bool sees_values() const {
    return role == Role::teacher_full || role == Role::teacher_partial ||
           role == Role::solo_full;
  }
  bool sees_features() const {
    return role == Role::learner || role == Role::teacher_full ||
           role == Role::solo_partial;
  }
};

struct MaskedObject {
  int id = 0;
  int cluster_id = 0;
  std::optional<std::pair<int, int>> position;
  std::optional<Shape> shape;
  std::optional<Color> color;
  std::optional<int> value;

  bool operator==(const MaskedObject&) const = default;
};

struct MaskedBoard {
  int trial_index = 0;
  std::vector<MaskedObject> objects;
};

MaskedBoard mask_board(const TrialBoard& board, ViewMask mask);

// Throws std::invalid_argument unless the record's picks cover exactly the
// five objects of its chosen cluster.
void validate_choice(const TrialBoard& board, const ChoiceRecord& choice);

// Net value of the picked objects.
int score_choice(const TrialBoard& board, const ChoiceRecord& choice);

}  // namespace teachsim::env
