#include "teachsim/choicemodel/model.hpp"

#include <cmath>
#include <stdexcept>

#include "teachsim/choicemodel/sample.hpp"
#include "teachsim/util/math.hpp"

namespace teachsim::model {

namespace {

void require_theta(std::span<const double> theta) {
  if (theta.size() != env::kFeatureCount)
    throw std::invalid_argument("theta must have 19 entries");
  for (double v : theta)
    if (!std::isfinite(v)) throw std::domain_error("theta must be finite");
}

}  // namespace

void PriorConfig::validate() const {
  if (!(lambda > 0.0)) throw std::invalid_argument("prior lambda must be positive");
}

double object_utility(std::span<const double> theta, const env::GameObject& o) {
  const auto idx = env::features::active_indices(o.shape, o.color);
  return theta[static_cast<std::size_t>(idx[0])] + theta[static_cast<std::size_t>(idx[1])] +
         theta[static_cast<std::size_t>(idx[2])];
}

double object_pick_probability(std::span<const double> theta, const env::GameObject& o) {
  require_theta(theta);
  return sigmoid(object_utility(theta, o));
}

double cluster_utility(std::span<const double> theta, const env::TrialBoard& board,
                       int cluster_id) {
  require_theta(theta);
  double total = 0.0;
  for (const auto& o : board.cluster(cluster_id)) {
    const double u = object_utility(theta, o);
    total += u * sigmoid(u);
  }
  return total;
}

std::array<double, env::kClusterCount> cluster_choice_probabilities(
    std::span<const double> theta, const env::TrialBoard& board) {
  require_theta(theta);
  std::array<double, env::kClusterCount> v{};
  for (int j = 0; j < env::kClusterCount; ++j) v[static_cast<std::size_t>(j)] = cluster_utility(theta, board, j);
  double m = v[0];
  for (double x : v) m = std::max(m, x);
  std::array<double, env::kClusterCount> p{};
  double total = 0.0;
  for (int j = 0; j < env::kClusterCount; ++j) {
    p[static_cast<std::size_t>(j)] = std::exp(v[static_cast<std::size_t>(j)] - m);
    total += p[static_cast<std::size_t>(j)];
  }
  for (double& x : p) x /= total;
  return p;
}

double trial_log_likelihood(std::span<const double> theta, const env::TrialBoard& board,
                            const ChoiceRecord& choice) {
  require_theta(theta);
  env::validate_choice(board, choice);

  std::array<double, env::kClusterCount> v{};
  for (int j = 0; j < env::kClusterCount; ++j) v[static_cast<std::size_t>(j)] = cluster_utility(theta, board, j);
  double m = v[0];
  for (double x : v) m = std::max(m, x);
  double sum_exp = 0.0;
  for (double x : v) sum_exp += std::exp(x - m);
  double ll = v[static_cast<std::size_t>(choice.chosen_cluster)] - (m + std::log(sum_exp));

  for (const auto& o : board.cluster(choice.chosen_cluster)) {
    const double u = object_utility(theta, o);
    ll += choice.picks.at(o.id) ? log_sigmoid(u) : log_sigmoid(-u);
  }
  return ll;
}

double log_prior(std::span<const double> theta, const PriorConfig& prior) {
  prior.validate();
  if (theta.size() != env::kFeatureCount)
    throw std::invalid_argument("theta must have 19 entries");
  const double log_half_lambda = std::log(prior.lambda / 2.0);
  double total = 0.0;
  for (double v : theta) total += log_half_lambda - prior.lambda * std::abs(v);
  return total;
}

ChoiceRecord sample_choice(std::span<const double> theta, const env::TrialBoard& board,
                           Rng& rng) {
  const auto probs = cluster_choice_probabilities(theta, board);
  ChoiceRecord record;
  record.trial_index = board.trial_index;
  record.chosen_cluster = static_cast<int>(rng.categorical(probs));
  for (const auto& o : board.cluster(record.chosen_cluster))
    record.picks[o.id] = rng.bernoulli(sigmoid(object_utility(theta, o)));
  return record;
}

kern::CellTable make_cell_table(std::span<const double> theta) {
  require_theta(theta);
  kern::CellTable table{};
  for (int c = 0; c < env::kColorCount; ++c) {
    for (int s = 0; s < env::kShapeCount; ++s) {
      const auto shape = static_cast<env::Shape>(s);
      const auto color = static_cast<env::Color>(c);
      const int cell = env::features::cell_index(shape, color);
      const double u = theta[static_cast<std::size_t>(env::features::color_index(color))] +
                       theta[static_cast<std::size_t>(env::features::shape_index(shape))] +
                       theta[static_cast<std::size_t>(env::features::conjunction_index(shape, color))];
      table.weighted_utility[cell] = u * sigmoid(u);
      table.log_pick[cell] = log_sigmoid(u);
      table.log_skip[cell] = log_sigmoid(-u);
    }
  }
  return table;
}

}  // namespace teachsim::model
