#pragma once

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "teachsim/agents/dyad.hpp"
#include "teachsim/analysis/stats.hpp"
#include "teachsim/analysis/text.hpp"
#include "teachsim/choicemodel/fit.hpp"

namespace teachsim::cli {

// exit code 1
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// exit code 2
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::uint64_t seed = 0;
  std::vector<agents::Condition> conditions;  // defaults to all six
  int dyads = 4;
  int board_count = 10;
  int window = 3;
  model::PriorConfig prior;
  opt::OptimizerConfig optimizer;
  agents::AgentConfig agent;
  std::string out_dir = "out";

  static RunConfig defaults();

  // Strict parse of the versioned config file: schema_version must be 1 and
  // unknown fields are rejected at every level.
  static RunConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  // 16-hex FNV-1a of the canonical serialized config.
  std::string hash() const;
};

struct SimulateRow {
  std::string condition;
  int dyad = 0;
  int final_score = 0;
};

struct SimulateResult {
  std::vector<SimulateRow> rows;  // sorted by (condition, dyad)
  std::map<std::string, agents::BatchSummary> summaries;
};

struct FitRow {
  std::string condition;
  int dyad = 0;
  model::MapEstimate estimate;
};

struct FitResult {
  std::vector<FitRow> rows;
  // condition -> mean fitted (pink, circle, pink.circle)
  std::map<std::string, std::array<double, 3>> aggregate;
  int skipped = 0;
};

struct AnalyzeResult {
  std::optional<stats::RegressionResult> regression;
  std::string regression_notice;
  std::vector<text::NgramCount> top_tokens;
  std::vector<text::NgramCount> top_bigrams;
  // condition -> category -> proportion (includes an "all" row)
  std::map<std::string, std::map<std::string, double>> category_proportions;
};

// Subcommand drivers. Each writes its artifacts under config.out_dir (atomic
// temp-file + rename) and returns the in-memory tables for composition.
void run_generate(const RunConfig& config);
SimulateResult run_simulate(const RunConfig& config);
FitResult run_fit(const std::string& logs_dir, const RunConfig& config);
AnalyzeResult run_analyze(const std::string& summary_csv, const std::string& corpus_jsonl,
                          const std::string& out_dir);
void run_report(const RunConfig& config);

// Shared helpers (exposed for tests).
void write_file_atomic(const std::string& path, const std::string& content);
std::string format_double(double v);  // shortest round-trip decimal
RunConfig load_config_file(const std::string& path);

}  // namespace teachsim::cli
