#include "teachsim/cli/app.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <tuple>

#include "teachsim/agents/learner.hpp"
#include "teachsim/analysis/window.hpp"
#include "teachsim/env/json_io.hpp"
#include "teachsim/util/rng.hpp"

namespace teachsim::cli {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double v) { return json(v).dump(); }

namespace {

// display-only rounding for report tables; data files keep exact values
std::string display(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

}  // namespace

void write_file_atomic(const std::string& path, const std::string& content) {
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + tmp.string());
    out << content;
    if (!out.good()) throw DataError("write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

namespace {

void reject_unknown_fields(const json& j, std::initializer_list<std::string_view> allowed,
                           const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw DataError("unknown config field '" + key + "' in " + where);
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace

RunConfig RunConfig::defaults() {
  RunConfig cfg;
  for (const auto& c : agents::all_conditions()) cfg.conditions.push_back(c);
  cfg.optimizer.x_tolerance = 1e-6;
  cfg.optimizer.f_tolerance = 1e-9;
  cfg.optimizer.max_iterations = 60;
  cfg.optimizer.max_line_evals = 80;
  return cfg;
}

RunConfig RunConfig::from_json(const json& j) {
  reject_unknown_fields(j,
                        {"schema_version", "seed", "conditions", "dyads", "boards", "trials",
                         "window", "lambda", "out_dir", "optimizer", "agent", "value_map"},
                        "config");
  if (!j.contains("schema_version") || j.at("schema_version").get<int>() != 1)
    throw DataError("config schema_version must be 1");

  RunConfig cfg = defaults();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("conditions")) {
    cfg.conditions.clear();
    for (const auto& name : j.at("conditions"))
      cfg.conditions.push_back(agents::condition_from_string(name.get<std::string>()));
  }
  if (j.contains("dyads")) cfg.dyads = j.at("dyads").get<int>();
  if (j.contains("boards")) cfg.board_count = j.at("boards").get<int>();
  if (j.contains("trials")) cfg.agent.trials = j.at("trials").get<int>();
  if (j.contains("window")) cfg.window = j.at("window").get<int>();
  if (j.contains("lambda")) cfg.prior.lambda = j.at("lambda").get<double>();
  if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();

  if (j.contains("optimizer")) {
    const json& o = j.at("optimizer");
    reject_unknown_fields(o,
                          {"x_tolerance", "f_tolerance", "max_iterations", "max_line_evals",
                           "restart_count", "seed"},
                          "optimizer");
    if (o.contains("x_tolerance")) cfg.optimizer.x_tolerance = o.at("x_tolerance").get<double>();
    if (o.contains("f_tolerance")) cfg.optimizer.f_tolerance = o.at("f_tolerance").get<double>();
    if (o.contains("max_iterations")) cfg.optimizer.max_iterations = o.at("max_iterations").get<int>();
    if (o.contains("max_line_evals")) cfg.optimizer.max_line_evals = o.at("max_line_evals").get<int>();
    if (o.contains("restart_count")) cfg.optimizer.restart_count = o.at("restart_count").get<int>();
    if (o.contains("seed")) cfg.optimizer.seed = o.at("seed").get<std::uint64_t>();
  }
  if (j.contains("agent")) {
    const json& a = j.at("agent");
    reject_unknown_fields(a,
                          {"ridge", "act_temperature", "own_score_weight", "chat_budget_full",
                           "chat_budget_partial", "assertion_reliability"},
                          "agent");
    if (a.contains("ridge")) cfg.agent.ridge = a.at("ridge").get<double>();
    if (a.contains("act_temperature")) cfg.agent.act_temperature = a.at("act_temperature").get<double>();
    if (a.contains("own_score_weight")) cfg.agent.own_score_weight = a.at("own_score_weight").get<double>();
    if (a.contains("chat_budget_full")) cfg.agent.chat_budget_full = a.at("chat_budget_full").get<int>();
    if (a.contains("chat_budget_partial")) cfg.agent.chat_budget_partial = a.at("chat_budget_partial").get<int>();
    if (a.contains("assertion_reliability")) cfg.agent.assertion_reliability = a.at("assertion_reliability").get<double>();
  }
  if (j.contains("value_map")) {
    const json& v = j.at("value_map");
    reject_unknown_fields(v, {"counterbalance", "grid"}, "value_map");
    if (v.contains("grid")) {
      cfg.agent.value_map = env::value_map_from_json(v);
    } else if (v.contains("counterbalance")) {
      cfg.agent.counterbalance = v.at("counterbalance").get<bool>();
    }
  }
  return cfg;
}

json RunConfig::to_json() const {
  json conditions = json::array();
  for (const auto& c : this->conditions) conditions.push_back(agents::to_string(c));
  json out = {{"schema_version", 1},
              {"seed", seed},
              {"conditions", std::move(conditions)},
              {"dyads", dyads},
              {"boards", board_count},
              {"trials", agent.trials},
              {"window", window},
              {"lambda", prior.lambda},
              {"optimizer",
               {{"x_tolerance", optimizer.x_tolerance},
                {"f_tolerance", optimizer.f_tolerance},
                {"max_iterations", optimizer.max_iterations},
                {"max_line_evals", optimizer.max_line_evals},
                {"restart_count", optimizer.restart_count},
                {"seed", optimizer.seed}}},
              {"agent",
               {{"ridge", agent.ridge},
                {"act_temperature", agent.act_temperature},
                {"own_score_weight", agent.own_score_weight},
                {"chat_budget_full", agent.chat_budget_full},
                {"chat_budget_partial", agent.chat_budget_partial},
                {"assertion_reliability", agent.assertion_reliability}}}};
  json value_map = {{"counterbalance", agent.counterbalance}};
  if (agent.value_map) value_map = env::value_map_to_json(*agent.value_map);
  out["value_map"] = std::move(value_map);
  return out;
}

std::string RunConfig::hash() const {
  const std::uint64_t h = fnv1a64(to_json().dump());
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RunConfig load_config_file(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw DataError("config parse error in " + path + ": " + e.what());
  }
  return RunConfig::from_json(j);
}

void run_generate(const RunConfig& config) {
  if (config.board_count < 1) throw UsageError("board count must be at least 1");
  const env::ValueMap map = config.agent.effective_value_map();
  std::ostringstream boards;
  for (int t = 0; t < config.board_count; ++t) {
    const env::TrialBoard board = env::generate_trial(config.seed, t, map, config.agent.generator);
    boards << env::board_to_json(board).dump() << '\n';
  }
  const std::string boards_path = (fs::path(config.out_dir) / "boards.jsonl").string();
  write_file_atomic(boards_path, boards.str());

  const json manifest = {{"seed", config.seed},
                         {"count", config.board_count},
                         {"config_hash", config.hash()}};
  write_file_atomic((fs::path(config.out_dir) / "generate_manifest.json").string(),
                    manifest.dump(2) + "\n");
  std::cout << "generated " << config.board_count << " boards (seed " << config.seed << ") -> "
            << boards_path << "\n";
}

namespace {

std::string log_filename(const std::string& condition, int dyad) {
  return condition + "-" + std::to_string(dyad) + ".jsonl";
}

}  // namespace

SimulateResult run_simulate(const RunConfig& config) {
  if (config.dyads < 1) throw UsageError("dyad count must be at least 1");
  if (config.conditions.empty()) throw UsageError("no conditions selected");

  std::vector<agents::Condition> conditions = config.conditions;
  std::sort(conditions.begin(), conditions.end(),
            [](const auto& a, const auto& b) { return to_string(a) < to_string(b); });

  SimulateResult result;
  std::ostringstream corpus;
  const std::string config_hash = config.hash();

  for (const auto& condition : conditions) {
    const std::string name = agents::to_string(condition);
    agents::BatchSummary summary;
    summary.condition = condition;
    for (int d = 0; d < config.dyads; ++d) {
      const std::uint64_t dyad_seed = mix_seed(config.seed, name, static_cast<std::uint64_t>(d));
      agents::EpisodeLog log = agents::run_dyad(condition, dyad_seed, config.agent);
      log.config_hash = config_hash;

      std::ostringstream log_text;
      log.write_jsonl(log_text);
      write_file_atomic((fs::path(config.out_dir) / "logs" / log_filename(name, d)).string(),
                        log_text.str());

      for (const auto& trial : log.trials) {
        if (trial.assertions.empty()) continue;
        std::string text;
        for (const auto& a : trial.assertions) {
          if (!text.empty()) text += "; ";
          text += agents::assertion_text(a, trial.board, &trial.learner_choice);
        }
        const json line = {{"dyad", name + "-" + std::to_string(d)},
                           {"trial", trial.board.trial_index},
                           {"text", text}};
        corpus << line.dump() << '\n';
      }

      summary.final_scores.push_back(log.final_score());
      result.rows.push_back({name, d, log.final_score()});
    }
    double sum = 0.0;
    for (int s : summary.final_scores) sum += s;
    summary.mean = sum / config.dyads;
    if (config.dyads > 1) {
      double ss = 0.0;
      for (int s : summary.final_scores) ss += (s - summary.mean) * (s - summary.mean);
      summary.sd = std::sqrt(ss / (config.dyads - 1));
    }
    result.summaries[name] = summary;
  }

  std::ostringstream csv;
  csv << "condition,dyad,final_score\n";
  for (const auto& row : result.rows)
    csv << row.condition << ',' << row.dyad << ',' << row.final_score << '\n';
  write_file_atomic((fs::path(config.out_dir) / "summary.csv").string(), csv.str());
  write_file_atomic((fs::path(config.out_dir) / "corpus.jsonl").string(), corpus.str());

  for (const auto& [name, summary] : result.summaries)
    std::cout << name << ": mean " << summary.mean << " sd " << summary.sd << " (n="
              << summary.final_scores.size() << ")\n";
  return result;
}

FitResult run_fit(const std::string& logs_dir, const RunConfig& config) {
  if (!fs::is_directory(logs_dir)) throw DataError("log directory not found: " + logs_dir);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(logs_dir))
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw DataError("no .jsonl logs in " + logs_dir);

  FitResult result;
  for (const auto& file : files) {
    try {
      std::ifstream in(file);
      const agents::EpisodeLog log = agents::EpisodeLog::read_jsonl(in);
      const model::MapEstimate estimate =
          stats::fit_window_utilities(log, config.window, config.prior, config.optimizer);

      const std::string stem = file.stem().string();
      const auto dash = stem.rfind('-');
      const int dyad = dash == std::string::npos ? 0 : std::stoi(stem.substr(dash + 1));
      result.rows.push_back({agents::to_string(log.condition), dyad, estimate});
    } catch (const std::exception& e) {
      std::cerr << "warning: skipping " << file.string() << ": " << e.what() << "\n";
      ++result.skipped;
    }
  }
  if (result.rows.empty()) throw DataError("all log files were skipped");
  std::sort(result.rows.begin(), result.rows.end(), [](const FitRow& a, const FitRow& b) {
    return std::tie(a.condition, a.dyad) < std::tie(b.condition, b.dyad);
  });

  // Fig-4-style panels: pink, circle, and the pink*circle conjunction.
  const int pink = env::features::color_index(env::Color::pink);
  const int circle = env::features::shape_index(env::Shape::circle);
  const int pink_circle = env::features::conjunction_index(env::Shape::circle, env::Color::pink);

  std::map<std::string, std::array<double, 4>> sums;  // 3 coefficients + count
  for (const auto& row : result.rows) {
    auto& s = sums[row.condition];
    s[0] += row.estimate.theta_hat[static_cast<std::size_t>(pink)];
    s[1] += row.estimate.theta_hat[static_cast<std::size_t>(circle)];
    s[2] += row.estimate.theta_hat[static_cast<std::size_t>(pink_circle)];
    s[3] += 1.0;
  }
  for (const auto& [condition, s] : sums)
    result.aggregate[condition] = {s[0] / s[3], s[1] / s[3], s[2] / s[3]};

  std::ostringstream csv;
  csv << "condition,dyad,converged,log_posterior";
  for (int f = 0; f < env::kFeatureCount; ++f) csv << ',' << env::features::name(f);
  csv << '\n';
  for (const auto& row : result.rows) {
    csv << row.condition << ',' << row.dyad << ',' << (row.estimate.diagnostics.converged ? 1 : 0)
        << ',' << format_double(row.estimate.log_posterior);
    for (double v : row.estimate.theta_hat) csv << ',' << format_double(v);
    csv << '\n';
  }
  write_file_atomic((fs::path(config.out_dir) / "coefficients.csv").string(), csv.str());

  std::ostringstream agg;
  agg << "condition,pink,circle,pink.circle\n";
  for (const auto& [condition, means] : result.aggregate)
    agg << condition << ',' << format_double(means[0]) << ',' << format_double(means[1]) << ','
        << format_double(means[2]) << '\n';
  write_file_atomic((fs::path(config.out_dir) / "fit_aggregate.csv").string(), agg.str());

  std::ostringstream fits;
  for (const auto& row : result.rows) {
    json line = row.estimate.to_json();
    line["condition"] = row.condition;
    line["dyad"] = row.dyad;
    fits << line.dump() << '\n';
  }
  write_file_atomic((fs::path(config.out_dir) / "fits.jsonl").string(), fits.str());
  return result;
}

namespace {

std::vector<SimulateRow> read_summary_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path);
  std::vector<SimulateRow> rows;
  std::string line;
  if (!std::getline(in, line) || line != "condition,dyad,final_score")
    throw DataError("unexpected summary header in " + path);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    SimulateRow row;
    std::string dyad, score;
    if (!std::getline(ss, row.condition, ',') || !std::getline(ss, dyad, ',') ||
        !std::getline(ss, score))
      throw DataError("bad summary row: " + line);
    row.dyad = std::stoi(dyad);
    row.final_score = std::stoi(score);
    rows.push_back(std::move(row));
  }
  return rows;
}

struct CorpusLine {
  std::string dyad;
  int trial = 0;
  std::string text;
};

std::vector<CorpusLine> read_corpus_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path);
  std::vector<CorpusLine> lines;
  std::string raw;
  while (std::getline(in, raw)) {
    if (raw.empty()) continue;
    const json j = json::parse(raw, nullptr, false);
    if (j.is_discarded()) throw DataError("bad corpus line: " + raw);
    lines.push_back({j.at("dyad").get<std::string>(), j.at("trial").get<int>(),
                     j.at("text").get<std::string>()});
  }
  return lines;
}

// "chat-full-12" -> "chat-full"; lines that do not parse group under "all".
std::string corpus_condition(const std::string& dyad) {
  const auto dash = dyad.rfind('-');
  if (dash == std::string::npos) return "all";
  const std::string prefix = dyad.substr(0, dash);
  try {
    agents::condition_from_string(prefix);
    return prefix;
  } catch (const std::exception&) {
    return "all";
  }
}

}  // namespace

AnalyzeResult run_analyze(const std::string& summary_csv, const std::string& corpus_jsonl,
                          const std::string& out_dir) {
  AnalyzeResult result;

  if (!summary_csv.empty()) {
    const auto rows = read_summary_csv(summary_csv);
    std::vector<std::string> visibility, communication;
    std::vector<double> outcome;
    std::set<std::string> present;
    for (const auto& row : rows) {
      const auto condition = agents::condition_from_string(row.condition);
      if (!condition.multiplayer()) continue;
      present.insert(row.condition);
      visibility.push_back(condition.visibility == agents::Visibility::full ? "full" : "partial");
      communication.push_back(condition.communication == agents::Communication::demo ? "demo"
                                                                                     : "chat");
      outcome.push_back(row.final_score);
    }
    if (present.size() < 4) {
      result.regression_notice =
          "regression skipped: need all four teaching conditions, found " +
          std::to_string(present.size());
      std::cout << result.regression_notice << "\n";
    } else {
      // Reported coding direction: full = +0.5, demo = +0.5.
      const auto design = stats::contrast_code(visibility, "full", "visibility", communication,
                                               "demo", "communication");
      result.regression = stats::ols_fit(design, outcome);
      json terms = json::array();
      for (std::size_t i = 0; i < result.regression->terms.size(); ++i)
        terms.push_back({{"term", result.regression->terms[i]},
                         {"beta", result.regression->coefficients[i]},
                         {"se", result.regression->standard_errors[i]},
                         {"t", result.regression->t_values[i]},
                         {"p", result.regression->p_values[i]}});
      write_file_atomic((fs::path(out_dir) / "regression.json").string(), terms.dump(2) + "\n");
    }
  }

  if (!corpus_jsonl.empty()) {
    const auto lines = read_corpus_jsonl(corpus_jsonl);
    std::vector<std::vector<std::string>> messages;
    std::vector<std::string> all_tokens;
    std::map<std::string, std::vector<std::string>> by_condition;
    for (const auto& line : lines) {
      auto tokens = text::tokenize(line.text);
      all_tokens.insert(all_tokens.end(), tokens.begin(), tokens.end());
      auto& bucket = by_condition[corpus_condition(line.dyad)];
      bucket.insert(bucket.end(), tokens.begin(), tokens.end());
      messages.push_back(std::move(tokens));
    }

    constexpr int kTopK = 20;
    auto tokens_counts = text::ngram_counts(messages, 1, true);
    if (tokens_counts.size() > kTopK) tokens_counts.resize(kTopK);
    // per-message counting: grams never bridge two chat messages
    auto bigram_counts = text::ngram_counts(messages, 2, true);
    if (bigram_counts.size() > kTopK) bigram_counts.resize(kTopK);
    result.top_tokens = tokens_counts;
    result.top_bigrams = bigram_counts;

    std::ostringstream tokens_csv;
    tokens_csv << "term,count\n";
    for (const auto& tc : tokens_counts) tokens_csv << tc.gram[0] << ',' << tc.count << '\n';
    write_file_atomic((fs::path(out_dir) / "tokens.csv").string(), tokens_csv.str());

    std::ostringstream bigrams_csv;
    bigrams_csv << "term,count\n";
    for (const auto& bc : bigram_counts)
      bigrams_csv << bc.gram[0] << ' ' << bc.gram[1] << ',' << bc.count << '\n';
    write_file_atomic((fs::path(out_dir) / "bigrams.csv").string(), bigrams_csv.str());

    const auto lexicon = text::CategoryLexicon::defaults();
    result.category_proportions["all"] = text::category_proportions(all_tokens, lexicon);
    for (const auto& [condition, tokens] : by_condition)
      result.category_proportions[condition] = text::category_proportions(tokens, lexicon);

    std::ostringstream categories_csv;
    categories_csv << "condition,category,proportion\n";
    for (const auto& [condition, proportions] : result.category_proportions)
      for (const auto& [category, value] : proportions)
        categories_csv << condition << ',' << category << ',' << format_double(value) << '\n';
    write_file_atomic((fs::path(out_dir) / "categories.csv").string(), categories_csv.str());
  }
  return result;
}

void run_report(const RunConfig& config) {
  run_generate(config);
  const SimulateResult sim = run_simulate(config);
  const FitResult fits = run_fit((fs::path(config.out_dir) / "logs").string(), config);
  const AnalyzeResult analysis =
      run_analyze((fs::path(config.out_dir) / "summary.csv").string(),
                  (fs::path(config.out_dir) / "corpus.jsonl").string(), config.out_dir);

  std::ostringstream md;
  md << "# teachsim report\n\n";
  md << "seed: " << config.seed << "  \nconfig hash: " << config.hash() << "\n\n";

  md << "## Final scores by condition\n\n";
  md << "| condition | dyads | mean | sd |\n|---|---|---|---|\n";
  for (const auto& [name, summary] : sim.summaries)
    md << "| " << name << " | " << summary.final_scores.size() << " | "
       << display(summary.mean) << " | " << display(summary.sd) << " |\n";

  md << "\n## Teaching-condition regression (score ~ visibility * communication)\n\n";
  if (analysis.regression) {
    md << "| term | beta | se | t | p |\n|---|---|---|---|---|\n";
    const auto& reg = *analysis.regression;
    for (std::size_t i = 0; i < reg.terms.size(); ++i)
      md << "| " << reg.terms[i] << " | " << display(reg.coefficients[i]) << " | "
         << display(reg.standard_errors[i]) << " | " << display(reg.t_values[i])
         << " | " << display(reg.p_values[i]) << " |\n";
  } else {
    md << analysis.regression_notice << "\n";
  }

  md << "\n## Mean fitted utility coefficients (last " << config.window << " trials)\n\n";
  md << "| condition | pink | circle | pink.circle |\n|---|---|---|---|\n";
  for (const auto& [condition, means] : fits.aggregate)
    md << "| " << condition << " | " << display(means[0]) << " | "
       << display(means[1]) << " | " << display(means[2]) << " |\n";

  if (!analysis.top_tokens.empty()) {
    md << "\n## Top chat tokens\n\n| token | count |\n|---|---|\n";
    for (const auto& tc : analysis.top_tokens) md << "| " << tc.gram[0] << " | " << tc.count << " |\n";
    md << "\n## Top chat bigrams\n\n| bigram | count |\n|---|---|\n";
    for (const auto& bc : analysis.top_bigrams)
      md << "| " << bc.gram[0] << ' ' << bc.gram[1] << " | " << bc.count << " |\n";
  }

  write_file_atomic((fs::path(config.out_dir) / "report.md").string(), md.str());
  std::cout << "report written to " << (fs::path(config.out_dir) / "report.md").string() << "\n";
}

}  // namespace teachsim::cli
