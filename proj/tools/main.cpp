#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "teachsim/cli/app.hpp"

namespace {

using teachsim::cli::RunConfig;

struct CommonFlags {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> config_path;
  std::optional<std::string> out_dir;
  std::optional<std::string> conditions;
  std::optional<int> dyads;
  std::optional<int> window;
  std::optional<double> lambda;
  std::optional<int> count;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--seed", flags.seed, "master RNG seed");
  cmd->add_option("--config", flags.config_path, "JSON config file");
  cmd->add_option("--out", flags.out_dir, "output directory");
  cmd->add_option("--conditions", flags.conditions, "comma-separated condition list");
  cmd->add_option("--dyads", flags.dyads, "dyads per condition");
  cmd->add_option("--window", flags.window, "fit window (last K trials)");
  cmd->add_option("--lambda", flags.lambda, "Laplace prior scale");
}

RunConfig resolve_config(const CommonFlags& flags) {
  RunConfig cfg =
      flags.config_path ? teachsim::cli::load_config_file(*flags.config_path) : RunConfig::defaults();
  if (flags.seed) cfg.seed = *flags.seed;
  if (flags.out_dir) cfg.out_dir = *flags.out_dir;
  if (flags.dyads) cfg.dyads = *flags.dyads;
  if (flags.window) cfg.window = *flags.window;
  if (flags.lambda) cfg.prior.lambda = *flags.lambda;
  if (flags.count) cfg.board_count = *flags.count;
  if (flags.conditions) {
    cfg.conditions.clear();
    std::string rest = *flags.conditions;
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string name = rest.substr(0, comma);
      if (!name.empty()) {
        try {
          cfg.conditions.push_back(teachsim::agents::condition_from_string(name));
        } catch (const std::exception& e) {
          throw teachsim::cli::UsageError(e.what());
        }
      }
      if (comma == std::string::npos) break;
      rest = rest.substr(comma + 1);
    }
    if (cfg.conditions.empty()) throw teachsim::cli::UsageError("empty condition list");
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simulator and estimation toolkit for a cluster-collection teaching game"};
  app.require_subcommand(1);

  CommonFlags generate_flags, simulate_flags, fit_flags, analyze_flags, report_flags;
  std::string logs_dir, summary_csv, corpus_jsonl;

  CLI::App* generate = app.add_subcommand("generate", "write seeded game boards as JSONL");
  add_common(generate, generate_flags);
  generate->add_option("--count", generate_flags.count, "number of boards");

  CLI::App* simulate = app.add_subcommand("simulate", "run dyads and write logs + score summary");
  add_common(simulate, simulate_flags);

  CLI::App* fit = app.add_subcommand("fit", "MAP-fit utility weights from episode logs");
  add_common(fit, fit_flags);
  fit->add_option("--logs", logs_dir, "directory of episode logs")->required();

  CLI::App* analyze = app.add_subcommand("analyze", "score regression and chat-corpus tables");
  add_common(analyze, analyze_flags);
  analyze->add_option("--summary", summary_csv, "summary.csv from simulate");
  analyze->add_option("--corpus", corpus_jsonl, "corpus.jsonl of chat messages");

  CLI::App* report = app.add_subcommand("report", "full pipeline: generate, simulate, fit, analyze");
  add_common(report, report_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (generate->parsed()) {
      teachsim::cli::run_generate(resolve_config(generate_flags));
    } else if (simulate->parsed()) {
      teachsim::cli::run_simulate(resolve_config(simulate_flags));
    } else if (fit->parsed()) {
      teachsim::cli::run_fit(logs_dir, resolve_config(fit_flags));
    } else if (analyze->parsed()) {
      const RunConfig cfg = resolve_config(analyze_flags);
      if (summary_csv.empty() && corpus_jsonl.empty())
        throw teachsim::cli::UsageError("analyze needs --summary and/or --corpus");
      teachsim::cli::run_analyze(summary_csv, corpus_jsonl, cfg.out_dir);
    } else if (report->parsed()) {
      teachsim::cli::run_report(resolve_config(report_flags));
    }
  } catch (const teachsim::cli::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
