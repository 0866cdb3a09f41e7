#pragma once

// Argument parsing for the lexsev tool. Kept apart from commands.hpp so the library
// does not pull in CLI11.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lexsev/commands.hpp"

namespace lexsev::cli {

struct Overrides {
  std::optional<std::string> out;
  std::optional<std::size_t> threads;
  bool strict = false;
  bool with_timing = false;
  std::vector<double> min_offense;
  std::optional<double> min_sup;
  std::optional<double> min_conf;
  std::optional<std::size_t> min_stab;
  std::optional<std::string> metric_case;
  std::optional<std::string> mean;
  std::optional<std::string> relativeness;
  std::optional<std::string> mining_mode;
  std::optional<std::size_t> top_k;
};

inline void apply(RunConfig& cfg, const Overrides& o) {
  if (o.out) cfg.output_dir = *o.out;
  if (o.threads) cfg.threads = *o.threads;
  cfg.strict = cfg.strict || o.strict;
  cfg.with_timing = cfg.with_timing || o.with_timing;
  if (!o.min_offense.empty()) cfg.min_offense = o.min_offense;
  if (o.min_sup) cfg.mining.min_support = parse_min_support(*o.min_sup);
  if (o.min_conf) cfg.mining.min_confidence = *o.min_conf;
  if (o.min_stab) cfg.min_stability = *o.min_stab;
  if (o.metric_case) cfg.metric_case = parse_metric_case(*o.metric_case);
  if (o.mean) cfg.metric_options.mean = parse_mean(*o.mean);
  if (o.relativeness) cfg.metric_options.relativeness = parse_relativeness(*o.relativeness);
  if (o.mining_mode) cfg.mining_mode = parse_mining_mode(*o.mining_mode);
  if (o.top_k) cfg.top_k = *o.top_k;
}

/// Entry point shared by the executable and the tests.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"lexsev: lexicon term severity, severe lists and stable hate rules"};
  app.fallthrough();
  app.require_subcommand(1);

  std::string config_path;
  Overrides o;
  app.add_option("--config", config_path, "JSON run configuration")->required();
  app.add_option("--out", o.out, "output directory (overrides the config)");
  app.add_flag("--strict", o.strict, "exit with status 1 when a warning was raised");
  app.add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--with-timing", o.with_timing, "add compute times to evaluation reports");
  app.add_option("--min-offense", o.min_offense, "severe-list threshold(s) in [0, 1]");
  app.add_option("--min-sup", o.min_sup, "minimum support: count >= 1 or fraction in (0, 1)");
  app.add_option("--min-conf", o.min_conf, "minimum confidence in [0, 1]");
  app.add_option("--min-stab", o.min_stab, "minimum number of databases a rule must qualify in");
  app.add_option("--case", o.metric_case, "metric case: hate | hate_plus_relative");
  app.add_option("--mean", o.mean, "offensiveness mean: harmonic | geometric");
  app.add_option("--relativeness", o.relativeness, "relativeness mode: ratio_bounded | prose");
  app.add_option("--mining-mode", o.mining_mode, "rule semantics: ordered | unordered");
  app.add_option("--top-k", o.top_k, "rows in the top-terms tables");

  const std::vector<std::pair<std::string, std::string>> commands{
      {"analyze", "term statistics, intra/inter agreement and summary tables"},
      {"severe", "severe term lists for each minOffense threshold"},
      {"eval", "confusion-matrix evaluation and ranking of all lists"},
      {"sweep", "F-measure over a range of minOffense thresholds"},
      {"mine", "sequence databases, per-database rules and stable rules"},
      {"graph", "concepts with transitive and lattice graphs"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o_out, o_err;
    int code = app.exit(e, o_out, o_err);
    out << o_out.str();
    err << o_err.str();
    return code == 0 ? kOk : kInputError;
  }

  std::string command = app.get_subcommands().front()->get_name();
  RunConfig cfg;
  try {
    cfg = load_run_config(config_path);
    apply(cfg, o);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  auto result = run_command(command, cfg, err);
  if (result.exit_code != kInputError)
    out << command << ": wrote " << result.files.size() << " files to " << cfg.output_dir.string() << " ("
        << result.warnings.size() << " warnings)\n";
  return result.exit_code;
}

}  // namespace lexsev::cli
