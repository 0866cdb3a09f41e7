#pragma once

// CSV and JSON renderings of every artifact. Undefined values are "NaN" in CSV and null
// in JSON; missing outer-join cells are "--" and null.

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "lexsev/agreement.hpp"
#include "lexsev/concepts.hpp"
#include "lexsev/evaluation.hpp"
#include "lexsev/match.hpp"
#include "lexsev/mining.hpp"

namespace lexsev::report {

using Json = nlohmann::ordered_json;

class CsvTable {
public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }
  std::size_t rows() const { return rows_.size(); }

  std::string str() const {
    std::string out;
    write_row(out, header_);
    for (const auto& r : rows_) write_row(out, r);
    return out;
  }

private:
  static void write_row(std::string& out, const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      const auto& f = row[i];
      if (f.find_first_of(",\"\n\r") == std::string::npos) {
        out += f;
        continue;
      }
      out += '"';
      for (char c : f) {
        if (c == '"') out += '"';
        out += c;
      }
      out += '"';
    }
    out += '\n';
  }

  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

inline std::string num(std::optional<double> v) { return text::format_fixed3(v); }
inline std::string num(double v) { return text::format_fixed3(v); }
inline std::string cnt(std::uint64_t v) { return std::to_string(v); }

inline Json jnum(std::optional<double> v) {
  if (!v || std::isnan(*v)) return nullptr;
  if (std::isinf(*v)) return *v > 0 ? "Infinity" : "-Infinity";
  return *v;
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// Lines by term count (artifact 1)

inline CsvTable histogram_csv(const std::vector<std::pair<ClassLabel, TermCountHistogram>>& per_class) {
  CsvTable t({"class", "n_terms", "line_count", "line_ids"});
  for (const auto& [cls, hist] : per_class)
    for (const auto& [n, b] : hist) {
      std::string ids;
      for (auto id : b.line_ids) ids += (ids.empty() ? "" : " ") + std::to_string(id);
      t.add({std::string(display_name(cls)), cnt(n), cnt(b.line_count), ids});
    }
  return t;
}

inline Json histogram_json(const std::vector<std::pair<ClassLabel, TermCountHistogram>>& per_class) {
  Json j = Json::object();
  for (const auto& [cls, hist] : per_class) {
    Json buckets = Json::array();
    for (const auto& [n, b] : hist)
      buckets.push_back({{"n_terms", n}, {"line_count", b.line_count}, {"line_ids", b.line_ids}});
    j[std::string(display_name(cls))] = buckets;
  }
  return j;
}

// Frequencies and line shares (artifacts 2 and 3)

inline CsvTable frequencies_csv(const TermStatsTable& s) {
  CsvTable t({"term", "Hate", "Relative-hate", "No-hate", "total"});
  for (const auto& r : s.terms) {
    std::vector<std::string> row{r.term.key()};
    for (auto c : kAllClasses) row.push_back(cnt(r.freq[c]));
    row.push_back(cnt(r.total_freq()));
    t.add(std::move(row));
  }
  for (const auto& z : s.zero_frequency) t.add({z.key(), "0", "0", "0", "0"});
  return t;
}

inline Json frequencies_json(const TermStatsTable& s) {
  Json terms = Json::array();
  for (const auto& r : s.terms) {
    Json f = Json::object();
    for (auto c : kAllClasses) f[std::string(display_name(c))] = r.freq[c];
    terms.push_back({{"term", r.term.key()}, {"frequency", f}, {"total", r.total_freq()}});
  }
  Json zero = Json::array();
  for (const auto& z : s.zero_frequency) zero.push_back(z.key());
  return {{"corpus", s.corpus}, {"list", s.list}, {"terms", terms}, {"zero_frequency", zero}};
}

inline CsvTable top_terms_csv(const TermStatsTable& s, std::size_t k) {
  CsvTable t({"class", "rank", "term", "frequency"});
  for (auto c : kAllClasses) {
    auto top = top_terms(s, c, k);
    for (std::size_t i = 0; i < top.size(); ++i)
      t.add({std::string(display_name(c)), cnt(i + 1), top[i].term, cnt(top[i].freq)});
  }
  return t;
}

inline Json top_terms_json(const TermStatsTable& s, std::size_t k) {
  Json j = Json::object();
  for (auto c : kAllClasses) {
    Json arr = Json::array();
    for (const auto& r : top_terms(s, c, k)) arr.push_back({{"term", r.term}, {"frequency", r.freq}});
    j[std::string(display_name(c))] = arr;
  }
  return {{"corpus", s.corpus}, {"list", s.list}, {"k", k}, {"top", j}};
}

inline CsvTable percent_lines_csv(const TermStatsTable& s) {
  CsvTable t({"term", "lines_Hate", "lines_Relative-hate", "lines_No-hate", "pct_Hate", "pct_Relative-hate",
              "pct_No-hate"});
  for (const auto& r : s.terms) {
    std::vector<std::string> row{r.term.key()};
    for (auto c : kAllClasses) row.push_back(cnt(r.lines[c]));
    for (auto c : kAllClasses) row.push_back(num(r.percent_lines(c)));
    t.add(std::move(row));
  }
  return t;
}

inline Json percent_lines_json(const TermStatsTable& s) {
  Json terms = Json::array();
  for (const auto& r : s.terms) {
    Json lines = Json::object(), pct = Json::object();
    for (auto c : kAllClasses) {
      lines[std::string(display_name(c))] = r.lines[c];
      pct[std::string(display_name(c))] = jnum(r.percent_lines(c));
    }
    terms.push_back({{"term", r.term.key()}, {"lines", lines}, {"percent_lines", pct}});
  }
  Json sizes = Json::object();
  for (auto c : kAllClasses) sizes[std::string(display_name(c))] = s.class_sizes[c];
  return {{"corpus", s.corpus}, {"list", s.list}, {"class_sizes", sizes}, {"terms", terms}};
}

// Outer joins (artifact 4)

inline CsvTable outer_join_csv(const std::vector<OuterJoinRow>& rows, JoinValue value) {
  CsvTable t({"term", "Hate", "Relative-hate", "No-hate"});
  for (const auto& r : rows) {
    std::vector<std::string> row{r.term};
    for (auto c : kAllClasses) {
      const auto& v = r.cells[c];
      if (!v) row.emplace_back("--");
      else row.push_back(value == JoinValue::Frequency ? cnt(static_cast<std::uint64_t>(*v)) : num(*v));
    }
    t.add(std::move(row));
  }
  return t;
}

inline Json outer_join_json(const std::vector<OuterJoinRow>& rows) {
  Json arr = Json::array();
  for (const auto& r : rows) {
    Json cells = Json::object();
    for (auto c : kAllClasses) cells[std::string(display_name(c))] = jnum(r.cells[c]);
    arr.push_back({{"term", r.term}, {"cells", cells}});
  }
  return arr;
}

// Intra / inter agreement (artifacts 5 and 6)

inline std::vector<std::string> case_header() {
  std::vector<std::string> h;
  for (auto mc : kAllMetricCases) {
    std::string s(display_name(mc));
    for (const char* f : {"Hatefulness", "Relativeness", "Offensiveness", "positive_lines", "negative_lines"})
      h.push_back(std::string(f) + "(" + s + ")");
  }
  return h;
}

inline void append_cases(std::vector<std::string>& row, const std::array<CaseMetrics, 2>& cases) {
  for (const auto& m : cases) {
    row.push_back(cnt(static_cast<std::uint64_t>(m.hatefulness)));
    row.push_back(num(m.relativeness));
    row.push_back(num(m.offensiveness));
    row.push_back(cnt(m.positive_lines));
    row.push_back(cnt(m.negative_lines));
  }
}

inline Json cases_json(const std::array<CaseMetrics, 2>& cases) {
  Json j = Json::object();
  for (auto mc : kAllMetricCases) {
    const auto& m = cases[index_of(mc)];
    j[std::string(to_string(mc))] = {{"hatefulness", m.hatefulness},
                                     {"relativeness", jnum(m.relativeness)},
                                     {"offensiveness", jnum(m.offensiveness)},
                                     {"positive_lines", m.positive_lines},
                                     {"negative_lines", m.negative_lines},
                                     {"positive_class_size", m.positive_class_size},
                                     {"negative_class_size", m.negative_class_size}};
  }
  return j;
}

inline CsvTable intra_csv(std::span<const IntraAgreementRecord> recs) {
  std::vector<std::string> h{"term", "surface"};
  for (auto& s : case_header()) h.push_back(s);
  CsvTable t(h);
  for (const auto& r : recs) {
    std::vector<std::string> row{r.term.key(), r.term.raw};
    append_cases(row, r.cases);
    t.add(std::move(row));
  }
  return t;
}

inline Json intra_json(std::span<const IntraAgreementRecord> recs) {
  Json arr = Json::array();
  for (const auto& r : recs) arr.push_back({{"term", r.term.key()}, {"surface", r.term.raw}, {"cases", cases_json(r.cases)}});
  return arr;
}

inline CsvTable inter_csv(std::span<const InterAgreementRecord> recs) {
  std::vector<std::string> h{"term", "surface"};
  for (auto& s : case_header()) h.push_back(s);
  h.emplace_back("HateListNames");
  CsvTable t(h);
  for (const auto& r : recs) {
    std::vector<std::string> row{r.term.key(), r.term.raw};
    append_cases(row, r.cases);
    row.push_back(text::join(r.membership, ";"));
    t.add(std::move(row));
  }
  return t;
}

inline Json inter_json(std::span<const InterAgreementRecord> recs) {
  Json arr = Json::array();
  for (const auto& r : recs)
    arr.push_back({{"term", r.term.key()},
                   {"surface", r.term.raw},
                   {"cases", cases_json(r.cases)},
                   {"membership", r.membership}});
  return arr;
}

// Summary_N (artifact 8)

inline CsvTable summary_csv(std::span<const SummaryRow> rows) {
  CsvTable t({"corpus", "class", "list", "N", "entries", "total_lines", "percent_entries"});
  for (const auto& r : rows)
    t.add({r.corpus, std::string(display_name(r.cls)), r.list, cnt(r.n_terms), cnt(r.entries), cnt(r.total_lines),
           num(r.percent())});
  return t;
}

inline Json summary_json(std::span<const SummaryRow> rows) {
  Json arr = Json::array();
  for (const auto& r : rows)
    arr.push_back({{"corpus", r.corpus},
                   {"class", std::string(display_name(r.cls))},
                   {"list", r.list},
                   {"N", r.n_terms},
                   {"entries", r.entries},
                   {"total_lines", r.total_lines},
                   {"percent_entries", r.percent()}});
  return arr;
}

// Severe lists

inline std::string severe_terms_text(const TermList& severe) {
  std::string out = "# " + severe.name() + "\n";
  for (const auto& e : severe.entries()) out += e.raw + "\n";
  return out;
}

// Evaluation

inline CsvTable eval_csv(std::span<const EvalReport> reports, bool with_timing) {
  std::vector<std::string> h{"task", "rank", "list", "list_size", "TP%", "FN%", "FP%", "TN%",
                             "accuracy", "precision", "recall", "f_measure"};
  if (with_timing) h.emplace_back("compute_time_ms");
  CsvTable t(h);
  std::string task;
  std::size_t rank = 0;
  for (const auto& r : reports) {
    rank = r.task.name() == task ? rank + 1 : 1;
    task = r.task.name();
    std::vector<std::string> row{task, cnt(rank), r.list, cnt(r.list_size), num(r.matrix.tp.percent()),
                                 num(r.matrix.fn.percent()), num(r.matrix.fp.percent()), num(r.matrix.tn.percent()),
                                 num(r.accuracy), num(r.precision), num(r.recall), num(r.f_measure)};
    if (with_timing) row.push_back(num(r.compute_time.count()));
    t.add(std::move(row));
  }
  return t;
}

inline Json cell_json(const PercentCell& c) {
  return {{"count", c.count}, {"total", c.total}, {"percent", c.percent()}};
}

inline Json eval_report_json(const EvalReport& r, bool with_timing) {
  Json j{{"task", r.task.name()},
         {"list", r.list},
         {"list_size", r.list_size},
         {"confusion",
          {{"tp", cell_json(r.matrix.tp)}, {"fn", cell_json(r.matrix.fn)}, {"fp", cell_json(r.matrix.fp)},
           {"tn", cell_json(r.matrix.tn)}}},
         {"accuracy", jnum(r.accuracy)},
         {"precision", jnum(r.precision)},
         {"recall", jnum(r.recall)},
         {"f_measure", jnum(r.f_measure)}};
  if (with_timing) j["compute_time_ms"] = r.compute_time.count();
  return j;
}

inline Json eval_json(std::span<const EvalReport> reports, bool with_timing) {
  Json arr = Json::array();
  for (const auto& r : reports) arr.push_back(eval_report_json(r, with_timing));
  return arr;
}

inline CsvTable sweep_csv(const SweepResult& s) {
  CsvTable t({"task", "case", "min_offense", "list_size", "accuracy", "precision", "recall", "f_measure", "error"});
  for (const auto& r : s.rows) {
    std::optional<double> a, p, rc, f;
    if (r.report) a = r.report->accuracy, p = r.report->precision, rc = r.report->recall, f = r.report->f_measure;
    t.add({s.task.name(), std::string(display_name(s.metric_case)), text::format_compact(r.threshold),
           cnt(r.list_size), num(a), num(p), num(rc), num(f), r.error});
  }
  return t;
}

inline Json sweep_json(const SweepResult& s) {
  Json rows = Json::array();
  for (const auto& r : s.rows) {
    Json j{{"min_offense", r.threshold}, {"list_size", r.list_size}};
    j["f_measure"] = r.report ? jnum(r.report->f_measure) : Json(nullptr);
    j["precision"] = r.report ? jnum(r.report->precision) : Json(nullptr);
    j["recall"] = r.report ? jnum(r.report->recall) : Json(nullptr);
    j["error"] = r.error.empty() ? Json(nullptr) : Json(r.error);
    rows.push_back(std::move(j));
  }
  return {{"task", s.task.name()}, {"case", std::string(to_string(s.metric_case))}, {"rows", rows}};
}

/// Tab-separated plot series: threshold and F. Severe list sizes are in the sweep table.
inline std::string sweep_series_tsv(const SweepResult& s) {
  std::string out = "min_offense\tf_measure\n";
  for (const auto& [t, f] : s.f_series()) out += text::format_compact(t) + "\t" + num(f) + "\n";
  return out;
}

// Rules

inline CsvTable rules_csv(std::span<const HateRule> rules) {
  CsvTable t({"antecedent", "consequent", "support", "antecedent_count", "confidence"});
  for (const auto& r : rules)
    t.add({text::join(r.antecedent, " "), text::join(r.consequent, " "), cnt(r.support), cnt(r.antecedent_count),
           num(r.confidence)});
  return t;
}

inline Json rules_json(std::span<const HateRule> rules) {
  Json arr = Json::array();
  for (const auto& r : rules)
    arr.push_back({{"antecedent", r.antecedent},
                   {"consequent", r.consequent},
                   {"support", r.support},
                   {"antecedent_count", r.antecedent_count},
                   {"confidence", r.confidence}});
  return arr;
}

inline CsvTable stable_csv(const StableRuleSet& set, std::span<const StableHateRule> rules) {
  std::vector<std::string> h{"antecedent", "consequent"};
  for (const auto& db : set.databases) {
    h.push_back("sup(" + db + ")");
    h.push_back("conf(" + db + ")");
    h.push_back("qualified(" + db + ")");
  }
  h.emplace_back("stability");
  h.emplace_back("stable");
  CsvTable t(h);
  for (const auto& r : rules) {
    std::vector<std::string> row{text::join(r.antecedent, " "), text::join(r.consequent, " ")};
    for (const auto& c : r.per_db) {
      if (!c) {
        row.insert(row.end(), {"--", "--", "--"});
        continue;
      }
      row.push_back(cnt(c->support));
      row.push_back(num(c->confidence));
      row.emplace_back(c->qualified ? "1" : "0");
    }
    row.push_back(cnt(r.stability));
    row.emplace_back(r.stable ? "1" : "0");
    t.add(std::move(row));
  }
  return t;
}

inline Json stable_json(const StableRuleSet& set, std::span<const StableHateRule> rules) {
  Json arr = Json::array();
  for (const auto& r : rules) {
    Json cells = Json::object();
    for (std::size_t d = 0; d < set.databases.size(); ++d) {
      const auto& c = r.per_db[d];
      cells[set.databases[d]] = c ? Json{{"support", c->support},
                                         {"antecedent_count", c->antecedent_count},
                                         {"confidence", c->confidence},
                                         {"qualified", c->qualified}}
                                  : Json(nullptr);
    }
    arr.push_back({{"antecedent", r.antecedent},
                   {"consequent", r.consequent},
                   {"databases", cells},
                   {"stability", r.stability},
                   {"stable", r.stable}});
  }
  return {{"databases", set.databases}, {"min_stability", set.min_stability}, {"rules", arr}};
}

inline CsvTable concepts_csv(std::span<const Concept> concepts) {
  CsvTable t({"concept", "rule_count", "terms", "rules"});
  for (const auto& c : concepts) {
    std::vector<std::string> rules;
    for (const auto& r : c.rules) rules.push_back(r.to_string());
    t.add({c.name(), cnt(c.rule_count()), text::join(c.terms, " "), text::join(rules, "; ")});
  }
  return t;
}

inline Json concepts_json(std::span<const Concept> concepts) {
  Json arr = Json::array();
  for (const auto& c : concepts) arr.push_back(to_json(c));
  return arr;
}

}  // namespace lexsev::report
