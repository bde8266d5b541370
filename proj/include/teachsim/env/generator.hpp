#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "teachsim/env/types.hpp"

namespace teachsim::env {

// Colors are specified by role, not literally, so that a pink/yellow
// counterbalance swap recolors generated boards without changing any other
// random draw. high/low resolve to the map's most valuable circle color and
// most negative square color.
enum class ColorRole { high, low, white, cyan };

Color resolve_role(ColorRole role, const ValueMap& map);

struct CellWeight {
  Shape shape = Shape::circle;
  ColorRole role = ColorRole::white;
  double weight = 0.0;
};

struct ArchetypeSpec {
  std::string name;
  std::vector<CellWeight> cells;  // weights must sum to 1
};

struct GeneratorConfig {
  enum class Style { themed, uniform };
  Style style = Style::themed;
  std::array<ArchetypeSpec, kClusterCount> archetypes;

  static GeneratorConfig defaults();

  // Throws std::invalid_argument on negative weights or per-archetype sums
  // away from 1.
  void validate() const;
};

// Deterministic board generation: four archetype clusters of five objects,
// integer values uniform on each cell's interval, corner positions on a
// 20x20 grid. Identical (seed, trial_index, config) always yields an
// identical board.
TrialBoard generate_trial(std::uint64_t rng_seed, int trial_index, const ValueMap& map,
                          const GeneratorConfig& config);

}  // namespace teachsim::env
