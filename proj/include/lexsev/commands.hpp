#pragma once

// Run configuration and the analyze / severe / eval / sweep / mine / graph pipelines.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lexsev/agreement.hpp"
#include "lexsev/concepts.hpp"
#include "lexsev/corpus.hpp"
#include "lexsev/errors.hpp"
#include "lexsev/evaluation.hpp"
#include "lexsev/mining.hpp"
#include "lexsev/normalize.hpp"
#include "lexsev/parallel.hpp"
#include "lexsev/report.hpp"
#include "lexsev/term_list.hpp"

namespace lexsev::cli {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

enum ExitCode : int { kOk = 0, kWarnings = 1, kInputError = 2 };

struct CorpusSpec {
  std::string name;
  fs::path path;
  CorpusSchema schema;
  ClassMap class_map;
};

struct ListSpec {
  std::string name;
  fs::path path;
};

struct RunConfig {
  fs::path output_dir = "lexsev-out";
  std::vector<CorpusSpec> corpora;
  std::vector<ListSpec> term_lists;
  std::vector<ListSpec> entity_lists;
  NormalizationConfig normalization;

  MetricCase metric_case = MetricCase::HateOnly;
  MetricOptions metric_options;
  std::size_t top_k = 20;

  std::vector<double> min_offense{0.7};
  std::vector<BinaryTask> eval_tasks;  // empty: every task the corpus supports

  std::optional<BinaryTask> sweep_task;  // unset: Hate Vs No-hate
  std::vector<double> sweep_thresholds;

  MiningParams mining;
  std::size_t min_stability = 1;
  MiningMode mining_mode = MiningMode::Ordered;
  ClassSet mining_classes{ClassLabel::Hate, ClassLabel::RelativeHate};
  bool mining_remove_stop_words = true;
  std::vector<std::string> mining_lists;  // empty: every term list

  std::size_t threads = 1;
  bool strict = false;
  bool with_timing = false;
};

inline ClassMap default_class_map() {
  ClassMap m;
  for (auto c : kAllClasses) {
    m.add(std::string(to_string(c)), c);
    m.add(std::string(display_name(c)), c);
  }
  return m;
}

inline ClassLabel require_class(const std::string& s) {
  auto c = parse_class_label(s);
  if (!c) throw ConfigError("unknown class '" + s + "' (expected hate, relative_hate or no_hate)");
  return *c;
}

/// "Hate Vs No-hate", "Hate + Relative-hate Vs No-hate", ...
inline BinaryTask parse_task(const std::string& s) {
  auto split = [](std::string_view v, std::string_view sep) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
      auto at = v.find(sep, pos);
      out.emplace_back(text::trim(v.substr(pos, at == std::string_view::npos ? v.npos : at - pos)));
      if (at == std::string_view::npos) return out;
      pos = at + sep.size();
    }
  };
  std::string lowered = text::ascii_lower(s);
  auto at = lowered.find(" vs ");
  if (at == std::string::npos) throw ConfigError("task '" + s + "' must look like 'Hate Vs No-hate'");
  BinaryTask t;
  for (const auto& c : split(std::string_view(s).substr(0, at), "+")) t.positive.insert(require_class(c));
  for (const auto& c : split(std::string_view(s).substr(at + 4), "+")) t.negative.insert(require_class(c));
  if (!t.positive.disjoint(t.negative)) throw ConfigError("task '" + s + "' uses a class on both sides");
  return t;
}

inline MetricCase parse_metric_case(const std::string& s) {
  auto l = text::ascii_lower(s);
  if (l == "hate" || l == "hate_only") return MetricCase::HateOnly;
  if (l == "hate_plus_relative" || l == "hate+relative" || l == "hate+relative_hate") return MetricCase::HatePlusRelative;
  throw ConfigError("unknown metric case '" + s + "' (expected hate or hate_plus_relative)");
}

inline MeanKind parse_mean(const std::string& s) {
  auto l = text::ascii_lower(s);
  if (l == "harmonic") return MeanKind::Harmonic;
  if (l == "geometric") return MeanKind::Geometric;
  throw ConfigError("unknown mean '" + s + "' (expected harmonic or geometric)");
}

inline RelativenessMode parse_relativeness(const std::string& s) {
  auto l = text::ascii_lower(s);
  if (l == "ratio_bounded" || l == "ratio") return RelativenessMode::RatioBounded;
  if (l == "prose") return RelativenessMode::Prose;
  throw ConfigError("unknown relativeness mode '" + s + "' (expected ratio_bounded or prose)");
}

inline MiningMode parse_mining_mode(const std::string& s) {
  auto l = text::ascii_lower(s);
  if (l == "ordered") return MiningMode::Ordered;
  if (l == "unordered") return MiningMode::Unordered;
  throw ConfigError("unknown mining mode '" + s + "' (expected ordered or unordered)");
}

/// Integers >= 1 are counts; values in (0, 1) are fractions of each database.
inline SupportThreshold parse_min_support(double v) {
  if (v > 0 && v < 1) return SupportThreshold::fraction(v);
  if (v >= 1 && v == std::floor(v)) return SupportThreshold(static_cast<std::uint64_t>(v));
  throw ConfigError("minSup must be an integer >= 1 or a fraction in (0, 1), got " + text::format_compact(v));
}

/// Thresholds from..to inclusive; computed by index so the values carry no accumulated drift.
inline std::vector<double> threshold_range(double from, double to, double step) {
  if (!(step > 0)) throw ConfigError("sweep step must be > 0");
  if (to < from) throw ConfigError("sweep 'to' must be >= 'from'");
  std::vector<double> out;
  auto n = static_cast<long>(std::floor((to - from) / step + 1e-9));
  for (long i = 0; i <= n; ++i) out.push_back(std::round((from + i * step) * 1e9) / 1e9);
  return out;
}

namespace config_detail {

template <class T>
T get_or(const Json& j, const char* key, T fallback) {
  if (!j.contains(key) || j[key].is_null()) return fallback;
  try {
    return j[key].get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("config key '") + key + "' has the wrong type");
  }
}

inline char single_char(const Json& j, const char* key, char fallback) {
  auto s = get_or<std::string>(j, key, std::string(1, fallback));
  if (s == "\\t" || s == "tab") return '\t';
  if (s.size() != 1) throw ConfigError(std::string("config key '") + key + "' must be a single character");
  return s[0];
}

inline std::string column(const Json& j, const char* key, const std::string& fallback) {
  if (!j.contains(key)) return fallback;
  if (j[key].is_number_integer()) return std::to_string(j[key].get<long>());
  return get_or<std::string>(j, key, fallback);
}

inline std::vector<double> numbers(const Json& j, const char* key, std::vector<double> fallback) {
  if (!j.contains(key)) return fallback;
  if (j[key].is_number()) return {j[key].get<double>()};
  return get_or<std::vector<double>>(j, key, fallback);
}

inline std::vector<ListSpec> lists(const Json& j, const char* key, const fs::path& base) {
  std::vector<ListSpec> out;
  if (!j.contains(key)) return out;
  for (const auto& e : j[key]) {
    ListSpec l;
    l.path = base / get_or<std::string>(e, "path", "");
    l.name = get_or<std::string>(e, "name", l.path.stem().string());
    out.push_back(std::move(l));
  }
  return out;
}

}  // namespace config_detail

/// Builds a config from JSON; relative paths resolve against `base_dir`.
inline RunConfig parse_run_config(const Json& j, const fs::path& base_dir) {
  using namespace config_detail;
  RunConfig cfg;
  if (!j.is_object()) throw ConfigError("config root must be an object");
  cfg.output_dir = base_dir / get_or<std::string>(j, "output", "lexsev-out");

  for (const auto& c : j.value("corpora", Json::array())) {
    CorpusSpec spec;
    spec.path = base_dir / get_or<std::string>(c, "path", "");
    spec.name = get_or<std::string>(c, "name", spec.path.stem().string());
    auto format = text::ascii_lower(get_or<std::string>(c, "format", "delimited"));
    if (format == "delimited" || format == "csv" || format == "tsv") {
      spec.schema.format = CorpusFormat::Delimited;
    } else if (format == "lines" || format == "lines_with_labels") {
      spec.schema.format = CorpusFormat::LinesWithLabels;
    } else {
      throw ConfigError("corpus '" + spec.name + "': unknown format '" + format + "'");
    }
    spec.schema.delimiter = single_char(c, "delimiter", format == "tsv" ? '\t' : ',');
    spec.schema.quote = single_char(c, "quote", '"');
    spec.schema.has_header = get_or<bool>(c, "header", true);
    spec.schema.text_column = column(c, "text_column", "text");
    spec.schema.label_column = column(c, "label_column", "label");
    if (c.contains("labels_path")) spec.schema.labels_path = base_dir / c["labels_path"].get<std::string>();
    if (c.contains("class_map")) {
      for (const auto& [source, canon] : c["class_map"].items())
        spec.class_map.add(source, require_class(canon.get<std::string>()));
    } else {
      spec.class_map = default_class_map();
    }
    cfg.corpora.push_back(std::move(spec));
  }
  cfg.term_lists = lists(j, "term_lists", base_dir);
  cfg.entity_lists = lists(j, "entity_lists", base_dir);

  if (j.contains("normalization")) {
    const auto& n = j["normalization"];
    auto stemmer = text::ascii_lower(get_or<std::string>(n, "stemmer", "porter"));
    if (stemmer == "porter") cfg.normalization.stemmer = Stemmer::Porter;
    else if (stemmer == "none") cfg.normalization.stemmer = Stemmer::None;
    else throw ConfigError("unknown stemmer '" + stemmer + "' (expected porter or none)");
    if (n.contains("placeholders"))
      cfg.normalization.placeholder_patterns = get_or<std::vector<std::string>>(n, "placeholders", {});
    if (n.contains("stop_words")) {
      auto words = get_or<std::vector<std::string>>(n, "stop_words", {});
      cfg.normalization.stop_words = {words.begin(), words.end()};
    }
    for (const auto& w : get_or<std::vector<std::string>>(n, "extra_stop_words", {}))
      cfg.normalization.stop_words.insert(w);
    cfg.normalization.remove_stop_words = get_or<bool>(n, "remove_stop_words", false);
  }

  if (j.contains("metrics")) {
    const auto& m = j["metrics"];
    cfg.metric_case = parse_metric_case(get_or<std::string>(m, "case", "hate"));
    cfg.metric_options.mean = parse_mean(get_or<std::string>(m, "mean", "harmonic"));
    cfg.metric_options.relativeness = parse_relativeness(get_or<std::string>(m, "relativeness", "ratio_bounded"));
    cfg.top_k = get_or<std::size_t>(m, "top_k", 20);
  }
  if (j.contains("severe")) cfg.min_offense = numbers(j["severe"], "min_offense", cfg.min_offense);
  if (j.contains("eval"))
    for (const auto& t : get_or<std::vector<std::string>>(j["eval"], "tasks", {}))
      cfg.eval_tasks.push_back(parse_task(t));
  if (j.contains("sweep")) {
    const auto& s = j["sweep"];
    if (s.contains("task")) cfg.sweep_task = parse_task(s["task"].get<std::string>());
    if (s.contains("thresholds")) cfg.sweep_thresholds = numbers(s, "thresholds", {});
    else if (s.contains("from") || s.contains("to") || s.contains("step"))
      cfg.sweep_thresholds = threshold_range(get_or<double>(s, "from", 0.0), get_or<double>(s, "to", 0.95),
                                             get_or<double>(s, "step", 0.05));
  }
  if (j.contains("mining")) {
    const auto& m = j["mining"];
    cfg.mining.min_support = parse_min_support(get_or<double>(m, "min_sup", 1));
    cfg.mining.min_confidence = get_or<double>(m, "min_conf", 0.0);
    cfg.mining.max_antecedent = get_or<std::size_t>(m, "max_antecedent", 4);
    cfg.mining.max_consequent = get_or<std::size_t>(m, "max_consequent", 4);
    auto denom = text::ascii_lower(get_or<std::string>(m, "denominator", "antecedent_qualified"));
    if (denom == "antecedent_qualified") cfg.mining.denominator = ConfidenceDenominator::AntecedentQualified;
    else if (denom == "item_support") cfg.mining.denominator = ConfidenceDenominator::ItemSupport;
    else throw ConfigError("unknown confidence denominator '" + denom + "'");
    long stab = get_or<long>(m, "min_stab", 1);
    if (stab < 1) throw ConfigError("minStab must be >= 1");
    cfg.min_stability = static_cast<std::size_t>(stab);
    cfg.mining_mode = parse_mining_mode(get_or<std::string>(m, "mode", "ordered"));
    if (m.contains("classes")) {
      cfg.mining_classes = {};
      for (const auto& c : get_or<std::vector<std::string>>(m, "classes", {})) cfg.mining_classes.insert(require_class(c));
    }
    cfg.mining_remove_stop_words = get_or<bool>(m, "remove_stop_words", true);
    cfg.mining_lists = get_or<std::vector<std::string>>(m, "lists", {});
  }
  cfg.threads = get_or<std::size_t>(j, "threads", 1);
  return cfg;
}

inline RunConfig load_run_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  Json j;
  try {
    j = Json::parse(in, nullptr, true, true);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_run_config(j, path.parent_path());
}

/// Threshold ranges and input files. Throws ConfigError naming the first problem.
inline void validate(const RunConfig& cfg) {
  for (double t : cfg.min_offense)
    if (!(t >= 0.0 && t <= 1.0)) throw ConfigError("minOffense must be in [0, 1], got " + text::format_compact(t));
  cfg.mining.validate();
  if (cfg.min_stability < 1) throw ConfigError("minStab must be >= 1");
  if (cfg.threads < 1) throw ConfigError("threads must be >= 1");
  auto require = [](const fs::path& p, const std::string& what) {
    if (p.empty() || !fs::is_regular_file(p)) throw ConfigError(p.string() + ": " + what + " file not found");
  };
  std::set<std::string> names;
  for (const auto& c : cfg.corpora) {
    require(c.path, "corpus");
    if (c.schema.format == CorpusFormat::LinesWithLabels) require(c.schema.labels_path, "labels");
    if (!names.insert(c.name).second) throw ConfigError("duplicate corpus name '" + c.name + "'");
  }
  names.clear();
  for (const auto& l : cfg.term_lists) {
    require(l.path, "term list");
    if (!names.insert(l.name).second) throw ConfigError("duplicate term list name '" + l.name + "'");
  }
  for (const auto& l : cfg.entity_lists) require(l.path, "entity list");
  for (const auto& m : cfg.mining_lists)
    if (!names.count(m)) throw ConfigError("mining list '" + m + "' is not a configured term list");
}

/// File-name-safe form of an artifact or list name.
inline std::string file_component(std::string_view name) {
  std::string out;
  for (unsigned char c : name) {
    bool bad = c < 0x20 || c == ' ' || c == '/' || c == '\\' || c == ':' || c == '<' || c == '>' || c == '|' ||
               c == '?' || c == '"';
    out += bad ? '_' : static_cast<char>(c);
  }
  return out.empty() ? "_" : out;
}

/// Writes files below the output root and records them for the manifest.
class OutputWriter {
public:
  OutputWriter(fs::path root, std::string command) : root_(std::move(root)), command_(std::move(command)) {}

  void write(const fs::path& relative, const std::string& content) {
    auto full = root_ / relative;
    fs::create_directories(full.parent_path());
    std::ofstream out(full, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(full.string() + ": cannot write");
    out << content;
    if (!out) throw Error(full.string() + ": write failed");
    files_[relative.generic_string()] = content.size();
  }

  void write_table(const fs::path& stem, const report::CsvTable& csv, const Json& json) {
    write(fs::path(stem.string() + ".csv"), csv.str());
    write(fs::path(stem.string() + ".json"), report::dump(json));
  }

  const std::map<std::string, std::size_t>& files() const { return files_; }

  /// Merges this run's files into <out>/manifest.json, sorted by path.
  void finish() {
    auto path = root_ / "manifest.json";
    std::map<std::string, Json> entries;
    if (fs::exists(path)) {
      try {
        std::ifstream in(path);
        auto old = Json::parse(in);
        for (const auto& e : old.at("files")) entries[e.at("path").get<std::string>()] = e;
      } catch (const std::exception&) {
        entries.clear();
      }
    }
    for (const auto& [p, bytes] : files_) entries[p] = Json{{"path", p}, {"command", command_}, {"bytes", bytes}};
    Json files = Json::array();
    for (auto& [p, e] : entries)
      if (fs::exists(root_ / p)) files.push_back(e);
    fs::create_directories(root_);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << report::dump(Json{{"tool", "lexsev"}, {"files", files}});
  }

private:
  fs::path root_;
  std::string command_;
  std::map<std::string, std::size_t> files_;
};

struct CommandResult {
  int exit_code = kOk;
  std::vector<std::string> warnings;
  std::map<std::string, std::size_t> files;
};

/// Loaded inputs shared by the pipelines.
class Session {
public:
  Session(RunConfig cfg, std::ostream& log) : cfg_(std::move(cfg)), log_(&log) {}

  const RunConfig& config() const { return cfg_; }
  std::ostream& log() { return *log_; }

  void warn(std::string msg) {
    *log_ << "warning: " << msg << "\n";
    warnings_.push_back(std::move(msg));
  }
  const std::vector<std::string>& warnings() const { return warnings_; }

  Normalizer normalizer(bool remove_stop_words) const {
    auto n = cfg_.normalization;
    n.remove_stop_words = remove_stop_words;
    return Normalizer(std::move(n));
  }

  std::vector<LabeledCorpus> load_corpora(const Normalizer& norm, std::vector<IngestionReport>* reports = nullptr) const {
    if (cfg_.corpora.empty()) throw ConfigError("config lists no corpora");
    auto loaded = parallel_map(cfg_.corpora.size(), cfg_.threads, [&](std::size_t i) {
      const auto& c = cfg_.corpora[i];
      IngestionReport rep;
      auto corpus = load_corpus(c.path, c.name, c.schema, c.class_map, norm, &rep);
      return std::pair(std::move(corpus), std::move(rep));
    });
    std::vector<LabeledCorpus> out;
    for (auto& [c, r] : loaded) {
      out.push_back(std::move(c));
      if (reports) reports->push_back(std::move(r));
    }
    return out;
  }

  std::vector<TermList> load_lists(const std::vector<ListSpec>& specs, const Normalizer& norm,
                                   std::vector<IngestionReport>* reports = nullptr) const {
    std::vector<TermList> out;
    for (const auto& s : specs) {
      IngestionReport rep;
      out.push_back(load_term_list(s.path, s.name, norm, &rep));
      if (reports) reports->push_back(std::move(rep));
    }
    return out;
  }

  std::vector<TermList> require_term_lists(const Normalizer& norm, std::vector<IngestionReport>* reports = nullptr) const {
    if (cfg_.term_lists.empty()) throw ConfigError("config lists no term lists");
    return load_lists(cfg_.term_lists, norm, reports);
  }

private:
  RunConfig cfg_;
  std::ostream* log_;
  std::vector<std::string> warnings_;
};

namespace pipeline {

inline Json ingestion_json(const std::vector<IngestionReport>& reports) {
  Json arr = Json::array();
  for (const auto& r : reports) arr.push_back(Json::parse(r.to_json().dump()));
  return arr;
}

inline void analyze(Session& s, OutputWriter& out) {
  const auto& cfg = s.config();
  auto norm = s.normalizer(cfg.normalization.remove_stop_words);
  std::vector<IngestionReport> reports;
  auto corpora = s.load_corpora(norm, &reports);
  auto lists = s.require_term_lists(norm, &reports);
  out.write("ingestion.json", report::dump(ingestion_json(reports)));

  auto summary = summary_n_hate_terms(corpora, lists);
  for (const auto& corpus : corpora) {
    const fs::path dir = file_component(corpus.name());
    auto per_list = parallel_map(lists.size(), cfg.threads, [&](std::size_t i) {
      TermMatcher matcher(lists[i]);
      std::vector<std::pair<ClassLabel, TermCountHistogram>> hist;
      for (auto c : kAllClasses)
        if (corpus.class_size(c)) hist.emplace_back(c, lines_by_term_count(corpus, matcher, c));
      return std::pair(std::move(hist), term_class_stats(corpus, matcher));
    });
    for (std::size_t i = 0; i < lists.size(); ++i) {
      const auto& [hist, stats] = per_list[i];
      const std::string suffix = "_" + file_component(lists[i].name());
      if (stats.terms.empty()) s.warn(corpus.name() + ": no term of list " + lists[i].name() + " occurs");
      out.write_table(dir / ("LinesByTermCount" + suffix), report::histogram_csv(hist), report::histogram_json(hist));
      out.write_table(dir / ("AllHateTermsFrequencies" + suffix), report::frequencies_csv(stats),
                      report::frequencies_json(stats));
      out.write_table(dir / ("TopTermsFrequency" + suffix), report::top_terms_csv(stats, cfg.top_k),
                      report::top_terms_json(stats, cfg.top_k));
      out.write_table(dir / ("AllHTsPercentLine" + suffix), report::percent_lines_csv(stats),
                      report::percent_lines_json(stats));
      auto freq_join = outer_join(stats, JoinValue::Frequency);
      auto pct_join = outer_join(stats, JoinValue::PercentLines);
      out.write_table(dir / ("OuterJoinHTsFrequencies" + suffix), report::outer_join_csv(freq_join, JoinValue::Frequency),
                      report::outer_join_json(freq_join));
      out.write_table(dir / ("OuterJoinHTsPercentLines" + suffix),
                      report::outer_join_csv(pct_join, JoinValue::PercentLines), report::outer_join_json(pct_join));
      auto intra = intra_agreement(corpus, lists[i], cfg.metric_options);
      out.write_table(dir / ("IntraAgreement" + suffix), report::intra_csv(intra), report::intra_json(intra));
    }
    auto inter = inter_agreement(corpus, lists, cfg.metric_options);
    out.write_table(dir / "InterAgreement", report::inter_csv(inter), report::inter_json(inter));
    std::vector<SummaryRow> mine;
    for (const auto& r : summary)
      if (r.corpus == corpus.name()) mine.push_back(r);
    out.write_table(dir / "Summary_N", report::summary_csv(mine), report::summary_json(mine));
  }
}

struct SevereBundle {
  std::vector<LabeledCorpus> corpora;
  std::vector<TermList> lists;
  std::vector<std::vector<TermList>> severe;  // per corpus, per threshold
};

inline SevereBundle severe(Session& s, OutputWriter& out) {
  const auto& cfg = s.config();
  auto norm = s.normalizer(cfg.normalization.remove_stop_words);
  SevereBundle b;
  b.corpora = s.load_corpora(norm);
  b.lists = s.require_term_lists(norm);
  for (const auto& corpus : b.corpora) {
    auto records = inter_agreement(corpus, b.lists, cfg.metric_options);
    auto& per = b.severe.emplace_back();
    for (double t : cfg.min_offense) {
      auto list = severe_list(records, cfg.metric_case, t);
      const fs::path stem = fs::path(file_component(corpus.name())) / ("SevereList_" + file_component(list.name()));
      out.write(fs::path(stem.string() + ".txt"), report::severe_terms_text(list));
      out.write(fs::path(stem.string() + ".json"),
                report::dump(Json::parse(severe_list_sidecar(list, cfg.metric_case, t, b.lists, corpus.name()).dump())));
      if (list.empty()) s.warn(corpus.name() + ": severe list " + list.name() + " is empty");
      per.push_back(std::move(list));
    }
  }
  return b;
}

inline void eval(Session& s, OutputWriter& out) {
  const auto& cfg = s.config();
  auto b = severe(s, out);
  for (std::size_t ci = 0; ci < b.corpora.size(); ++ci) {
    const auto& corpus = b.corpora[ci];
    std::vector<TermList> candidates = b.lists;
    for (const auto& sv : b.severe[ci])
      if (!sv.empty()) candidates.push_back(sv);
    auto supported = enumerate_tasks(corpus);
    std::vector<BinaryTask> tasks;
    if (cfg.eval_tasks.empty()) {
      tasks = supported;
    } else {
      for (const auto& t : cfg.eval_tasks) {
        if (std::find(supported.begin(), supported.end(), t) == supported.end())
          s.warn(corpus.name() + ": task '" + t.name() + "' references an empty class; skipped");
        else
          tasks.push_back(t);
      }
    }
    std::vector<EvalReport> reports;
    for (const auto& t : tasks) {
      auto ranked = rank_lists(corpus, candidates, t, cfg.threads);
      reports.insert(reports.end(), ranked.begin(), ranked.end());
    }
    if (reports.empty()) s.warn(corpus.name() + ": nothing to evaluate");
    out.write_table(fs::path(file_component(corpus.name())) / "Eval", report::eval_csv(reports, cfg.with_timing),
                    report::eval_json(reports, cfg.with_timing));
  }
}

inline std::vector<double> default_sweep_thresholds() { return threshold_range(0.0, 0.95, 0.05); }

inline void sweep(Session& s, OutputWriter& out) {
  const auto& cfg = s.config();
  auto norm = s.normalizer(cfg.normalization.remove_stop_words);
  auto corpora = s.load_corpora(norm);
  auto lists = s.require_term_lists(norm);
  auto task = cfg.sweep_task.value_or(BinaryTask{{ClassLabel::Hate}, {ClassLabel::NoHate}});
  auto thresholds = cfg.sweep_thresholds.empty() ? default_sweep_thresholds() : cfg.sweep_thresholds;
  for (const auto& corpus : corpora) {
    auto supported = enumerate_tasks(corpus);
    if (std::find(supported.begin(), supported.end(), task) == supported.end()) {
      s.warn(corpus.name() + ": task '" + task.name() + "' references an empty class; sweep skipped");
      continue;
    }
    auto result = sweep_min_offense(corpus, lists, task, cfg.metric_case, thresholds, cfg.metric_options, cfg.threads);
    const fs::path dir = file_component(corpus.name());
    out.write_table(dir / "Sweep", report::sweep_csv(result), report::sweep_json(result));
    out.write(dir / "SweepSeries.tsv", report::sweep_series_tsv(result));
  }
}

inline std::string sequence_file_text(const SequenceDatabase& db) {
  std::ostringstream os;
  write_sequence_database(os, db);
  return os.str();
}

/// Builds the corpus x list sequence databases and joins the rules mined from each.
inline StableRuleSet mine(Session& s, OutputWriter& out, bool write_rules) {
  const auto& cfg = s.config();
  auto norm = s.normalizer(cfg.mining_remove_stop_words);
  auto corpora = s.load_corpora(norm);
  auto lists = s.require_term_lists(norm);
  auto entity_lists = s.load_lists(cfg.entity_lists, norm);
  auto entities = union_list(entity_lists, "entities");
  if (entities.empty()) s.warn("no entity lists configured; databases hold hate terms only");

  std::vector<const TermList*> selected;
  for (const auto& l : lists)
    if (cfg.mining_lists.empty() ||
        std::find(cfg.mining_lists.begin(), cfg.mining_lists.end(), l.name()) != cfg.mining_lists.end())
      selected.push_back(&l);

  std::vector<SequenceDatabase> dbs;
  for (const auto& corpus : corpora) {
    auto records = inter_agreement(corpus, lists, cfg.metric_options);
    for (const auto* list : selected) {
      TermList inter(list->name());
      for (const auto& r : records)
        if (list->contains(r.term.key())) inter.add(r.term);
      auto db = build_rep_database(corpus, inter, entities, cfg.mining_classes,
                                   corpus.name() + "__" + list->name());
      if (db.empty()) s.warn("database " + db.name + " is empty after reduction");
      if (write_rules) out.write(fs::path("rules") / (file_component(db.name) + ".seq"), sequence_file_text(db));
      dbs.push_back(std::move(db));
    }
  }
  if (dbs.empty()) throw ConfigError("no databases to mine (check mining.lists)");

  auto result = stable_rules(dbs, cfg.mining, cfg.min_stability, cfg.mining_mode, cfg.threads);
  if (result.rules.empty()) s.warn("no rules met minSup and minConf in any database");
  if (write_rules) {
    for (std::size_t d = 0; d < dbs.size(); ++d) {
      std::vector<HateRule> rules;
      for (const auto& r : result.rules) {
        const auto& c = r.per_db[d];
        if (c && c->qualified) rules.push_back(HateRule{r.antecedent, r.consequent, c->support, c->confidence,
                                                        c->antecedent_count});
      }
      out.write_table(fs::path("rules") / ("Rules_" + file_component(dbs[d].name)), report::rules_csv(rules),
                      report::rules_json(rules));
    }
    out.write_table("rules/OuterJoin", report::stable_csv(result, result.rules),
                    report::stable_json(result, result.rules));
    auto stable = result.stable_rules();
    out.write_table("rules/StableRules", report::stable_csv(result, stable), report::stable_json(result, stable));
  }
  if (result.stable_rules().empty()) s.warn("no rule reached minStab = " + std::to_string(cfg.min_stability));
  return result;
}

inline void graph(Session& s, OutputWriter& out) {
  auto result = mine(s, out, false);
  auto concepts = group_similar_rules(result.stable_rules());
  out.write_table("graphs/Concepts", report::concepts_csv(concepts), report::concepts_json(concepts));
  for (const auto& c : concepts) {
    for (const auto& g : {build_transitive_graph(c), build_lattice_graph(c)}) {
      const fs::path stem = fs::path("graphs") / file_component(g.name());
      out.write(fs::path(stem.string() + ".dot"), export_dot(g));
      out.write(fs::path(stem.string() + ".json"), report::dump(to_json(g)));
    }
  }
}

}  // namespace pipeline

/// Runs one command end to end. Input errors become exit status 2 with a diagnostic on `log`;
/// warnings give status 1 under `strict`.
inline CommandResult run_command(const std::string& command, const RunConfig& cfg, std::ostream& log) {
  CommandResult result;
  try {
    validate(cfg);
    Session session(cfg, log);
    OutputWriter out(cfg.output_dir, command);
    if (command == "analyze") pipeline::analyze(session, out);
    else if (command == "severe") pipeline::severe(session, out);
    else if (command == "eval") pipeline::eval(session, out);
    else if (command == "sweep") pipeline::sweep(session, out);
    else if (command == "mine") pipeline::mine(session, out, true);
    else if (command == "graph") pipeline::graph(session, out);
    else throw ConfigError("unknown command '" + command + "'");
    out.finish();
    result.files = out.files();
    result.warnings = session.warnings();
    result.exit_code = (cfg.strict && !result.warnings.empty()) ? kWarnings : kOk;
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    result.exit_code = kInputError;
  } catch (const fs::filesystem_error& e) {
    log << "error: " << e.what() << "\n";
    result.exit_code = kInputError;
  }
  return result;
}

}  // namespace lexsev::cli
