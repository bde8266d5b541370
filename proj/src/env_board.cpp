#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "teachsim/env/generator.hpp"
#include "teachsim/util/rng.hpp"

namespace teachsim::env {

Color resolve_role(ColorRole role, const ValueMap& map) {
  switch (role) {
    case ColorRole::high: return map.highest_value_color();
    case ColorRole::low: return map.lowest_value_color();
    case ColorRole::white: return Color::white;
    case ColorRole::cyan: return Color::cyan;
  }
  throw std::invalid_argument("bad color role");
}

GeneratorConfig GeneratorConfig::defaults() {
  GeneratorConfig cfg;
  cfg.archetypes[0] = {"circle-rich",
                       {{Shape::circle, ColorRole::high, 0.4},
                        {Shape::circle, ColorRole::white, 0.4},
                        {Shape::circle, ColorRole::cyan, 0.2}}};
  cfg.archetypes[1] = {"high-color-rich",
                       {{Shape::circle, ColorRole::high, 0.45},
                        {Shape::triangle, ColorRole::high, 0.55}}};
  cfg.archetypes[2] = {"low-color-rich",
                       {{Shape::square, ColorRole::low, 0.6},
                        {Shape::triangle, ColorRole::low, 0.4}}};
  cfg.archetypes[3] = {"mixed-negatives",
                       {{Shape::circle, ColorRole::white, 0.15},
                        {Shape::circle, ColorRole::cyan, 0.15},
                        {Shape::square, ColorRole::white, 0.2},
                        {Shape::square, ColorRole::cyan, 0.2},
                        {Shape::triangle, ColorRole::white, 0.15},
                        {Shape::triangle, ColorRole::cyan, 0.15}}};
  return cfg;
}

void GeneratorConfig::validate() const {
  for (const auto& arch : archetypes) {
    if (arch.cells.empty())
      throw std::invalid_argument("archetype '" + arch.name + "' has no cells");
    double sum = 0.0;
    for (const auto& cw : arch.cells) {
      if (!(cw.weight >= 0.0))
        throw std::invalid_argument("archetype '" + arch.name + "' has a negative weight");
      sum += cw.weight;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw std::invalid_argument("archetype '" + arch.name +
                                  "' weights sum to " + std::to_string(sum) + ", expected 1");
  }
}

namespace {

constexpr int kGridSide = 20;
constexpr int kPatchSide = 6;

// Corner origins for the four clusters on the 20x20 grid.
constexpr std::pair<int, int> corner(int cluster_id) {
  switch (cluster_id) {
    case 0: return {0, 0};
    case 1: return {0, kGridSide - kPatchSide};
    case 2: return {kGridSide - kPatchSide, 0};
    default: return {kGridSide - kPatchSide, kGridSide - kPatchSide};
  }
}

struct ResolvedCell {
  Shape shape;
  Color color;
  ValueInterval interval;
};

std::vector<ResolvedCell> resolve_archetype(const ArchetypeSpec& arch, const ValueMap& map,
                                            std::vector<double>& weights_out) {
  std::vector<ResolvedCell> cells;
  weights_out.clear();
  for (const auto& cw : arch.cells) {
    const Color color = resolve_role(cw.role, map);
    const auto& iv = map.cell(cw.shape, color);
    if (!iv)
      throw std::invalid_argument("archetype '" + arch.name + "' references unmapped cell " +
                                  to_string(color) + " " + to_string(cw.shape));
    cells.push_back({cw.shape, color, *iv});
    weights_out.push_back(cw.weight);
  }
  return cells;
}

// Role-ordered enumeration of mapped cells, used by the uniform style. Role
// order (high, low, white, cyan) keeps the draw sequence identical across a
// counterbalance swap.
std::vector<ResolvedCell> mapped_cells_role_order(const ValueMap& map) {
  std::vector<ResolvedCell> cells;
  for (ColorRole role : {ColorRole::high, ColorRole::low, ColorRole::white, ColorRole::cyan}) {
    const Color color = resolve_role(role, map);
    for (int s = 0; s < kShapeCount; ++s) {
      const auto shape = static_cast<Shape>(s);
      if (const auto& iv = map.cell(shape, color))
        cells.push_back({shape, color, *iv});
    }
  }
  return cells;
}

bool has_positive_cluster(const TrialBoard& board) {
  for (int j = 0; j < kClusterCount; ++j) {
    int positives = 0;
    for (const auto& o : board.cluster(j))
      if (o.value > 0) positives += o.value;
    if (positives > 0) return true;
  }
  return false;
}

void place_objects(TrialBoard& board, Rng& rng) {
  for (int j = 0; j < kClusterCount; ++j) {
    std::array<int, kPatchSide * kPatchSide> offsets{};
    std::iota(offsets.begin(), offsets.end(), 0);
    rng.shuffle(std::span<int>(offsets));
    const auto [r0, c0] = corner(j);
    for (int k = 0; k < kClusterSize; ++k) {
      const int off = offsets[static_cast<std::size_t>(k)];
      board.objects[static_cast<std::size_t>(j) * kClusterSize + k].position = {
          r0 + off / kPatchSide, c0 + off % kPatchSide};
    }
  }
}

TrialBoard generate_once(Rng& rng, int trial_index, const ValueMap& map,
                         const GeneratorConfig& config) {
  TrialBoard board;
  board.trial_index = trial_index;
  board.objects.resize(kBoardSize);

  if (config.style == GeneratorConfig::Style::themed) {
    std::array<int, kClusterCount> order = {0, 1, 2, 3};
    rng.shuffle(std::span<int>(order));
    std::vector<double> weights;
    for (int j = 0; j < kClusterCount; ++j) {
      const auto cells =
          resolve_archetype(config.archetypes[static_cast<std::size_t>(order[static_cast<std::size_t>(j)])], map, weights);
      for (int k = 0; k < kClusterSize; ++k) {
        const auto& cell = cells[rng.categorical(weights)];
        auto& o = board.objects[static_cast<std::size_t>(j) * kClusterSize + k];
        o.id = j * kClusterSize + k;
        o.cluster_id = j;
        o.shape = cell.shape;
        o.color = cell.color;
        o.value = static_cast<int>(rng.uniform_int(cell.interval.lo, cell.interval.hi));
      }
    }
  } else {
    const auto cells = mapped_cells_role_order(map);
    const std::vector<double> weights(cells.size(), 1.0);
    for (int i = 0; i < kBoardSize; ++i) {
      const auto& cell = cells[rng.categorical(weights)];
      auto& o = board.objects[static_cast<std::size_t>(i)];
      o.id = i;
      o.cluster_id = i / kClusterSize;
      o.shape = cell.shape;
      o.color = cell.color;
      o.value = static_cast<int>(rng.uniform_int(cell.interval.lo, cell.interval.hi));
    }
  }

  place_objects(board, rng);
  return board;
}

}  // namespace

TrialBoard generate_trial(std::uint64_t rng_seed, int trial_index, const ValueMap& map,
                          const GeneratorConfig& config) {
  config.validate();
  map.validate();
  Rng rng(mix_seed(rng_seed, "board", static_cast<std::uint64_t>(trial_index)));

  // The themed default contains an all-circle archetype, so the positivity
  // requirement holds structurally; the uniform style occasionally needs a
  // redraw.
  for (int attempt = 0; attempt < 128; ++attempt) {
    TrialBoard board = generate_once(rng, trial_index, map, config);
    if (has_positive_cluster(board)) {
      board.validate();
      return board;
    }
  }
  throw std::runtime_error("board generation failed to produce a positive cluster");
}

}  // namespace teachsim::env
