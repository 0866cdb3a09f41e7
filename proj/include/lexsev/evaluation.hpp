#pragma once

#include <algorithm>
#include <chrono>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lexsev/agreement.hpp"
#include "lexsev/corpus.hpp"
#include "lexsev/errors.hpp"
#include "lexsev/match.hpp"
#include "lexsev/parallel.hpp"

namespace lexsev {

/// Positive vs negative class sides for binary-relevance scoring.
struct BinaryTask {
  ClassSet positive;
  ClassSet negative;

  std::string name() const { return positive.display() + " Vs " + negative.display(); }
  bool operator==(const BinaryTask&) const = default;
};

/// The six binary-relevance cases over three classes.
inline std::vector<BinaryTask> all_binary_tasks() {
  using C = ClassLabel;
  return {
      {{C::Hate}, {C::NoHate}},
      {{C::Hate}, {C::RelativeHate}},
      {{C::Hate}, {C::RelativeHate, C::NoHate}},
      {{C::Hate, C::RelativeHate}, {C::NoHate}},
      {{C::RelativeHate}, {C::NoHate}},
      {{C::NoHate}, {C::Hate, C::RelativeHate}},
  };
}

/// Tasks whose every referenced class has lines in `corpus`.
inline std::vector<BinaryTask> enumerate_tasks(const LabeledCorpus& corpus) {
  std::vector<BinaryTask> out;
  for (const auto& t : all_binary_tasks()) {
    bool ok = true;
    for (auto c : kAllClasses)
      if ((t.positive.contains(c) || t.negative.contains(c)) && corpus.class_size(c) == 0) ok = false;
    if (ok) out.push_back(t);
  }
  return out;
}

/// count out of total, as a percentage of the class side.
struct PercentCell {
  std::uint64_t count = 0;
  std::uint64_t total = 0;

  double percent() const { return total ? 100.0 * static_cast<double>(count) / static_cast<double>(total) : 0.0; }
  double ratio() const { return total ? static_cast<double>(count) / static_cast<double>(total) : 0.0; }
};

/// tp/fn are shares of positive-side lines, fp/tn of negative-side lines.
struct PercentConfusionMatrix {
  PercentCell tp, fn, fp, tn;
};

/// Presence of any list term, per corpus line (indexed like corpus.lines()).
inline std::vector<bool> line_hits(const LabeledCorpus& corpus, const TermList& list) {
  TermMatcher matcher(list);
  std::vector<bool> hits;
  hits.reserve(corpus.size());
  for (const auto& line : corpus.lines()) hits.push_back(matcher.any(line.tokens));
  return hits;
}

inline PercentConfusionMatrix confusion_from_hits(const LabeledCorpus& corpus, const std::vector<bool>& hits,
                                                  const BinaryTask& task) {
  const auto pos_total = corpus.side_size(task.positive);
  const auto neg_total = corpus.side_size(task.negative);
  if (pos_total == 0 || neg_total == 0) throw EvaluationError("empty task side: " + task.name());
  PercentConfusionMatrix m;
  m.tp.total = m.fn.total = pos_total;
  m.fp.total = m.tn.total = neg_total;
  const auto& lines = corpus.lines();
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto label = lines[i].label;
    if (task.positive.contains(label)) ++(hits[i] ? m.tp.count : m.fn.count);
    else if (task.negative.contains(label)) ++(hits[i] ? m.fp.count : m.tn.count);
  }
  return m;
}

inline PercentConfusionMatrix confusion(const LabeledCorpus& corpus, const TermList& list, const BinaryTask& task) {
  return confusion_from_hits(corpus, line_hits(corpus, list), task);
}

struct DerivedMetrics {
  std::optional<double> accuracy, precision, recall, f_measure;
};

/// Accuracy, precision, recall and F computed on the percentage cells.
inline DerivedMetrics derive_metrics(const PercentConfusionMatrix& m) {
  const double tp = m.tp.percent(), fn = m.fn.percent(), fp = m.fp.percent(), tn = m.tn.percent();
  DerivedMetrics d;
  if (tp + tn + fp + fn > 0) d.accuracy = (tp + tn) / (tp + tn + fp + fn);
  if (tp + fp > 0) d.precision = tp / (tp + fp);
  if (tp + fn > 0) d.recall = tp / (tp + fn);
  if (d.precision && d.recall && *d.precision + *d.recall > 0)
    d.f_measure = 2.0 * *d.precision * *d.recall / (*d.precision + *d.recall);
  return d;
}

struct EvalReport {
  std::string list;
  std::size_t list_size = 0;
  BinaryTask task;
  PercentConfusionMatrix matrix;
  std::optional<double> accuracy, precision, recall, f_measure;
  std::chrono::duration<double, std::milli> compute_time{0};
};

inline EvalReport make_report(const TermList& list, const BinaryTask& task, const PercentConfusionMatrix& m) {
  auto d = derive_metrics(m);
  return EvalReport{list.name(), list.size(), task, m, d.accuracy, d.precision, d.recall, d.f_measure, {}};
}

inline EvalReport evaluate(const LabeledCorpus& corpus, const TermList& list, const BinaryTask& task) {
  auto start = std::chrono::steady_clock::now();
  auto report = make_report(list, task, confusion(corpus, list, task));
  report.compute_time = std::chrono::steady_clock::now() - start;
  return report;
}

/// Descending F; ties by higher precision, then smaller list, then name. Undefined values sort last.
inline bool ranks_before(const EvalReport& a, const EvalReport& b) {
  auto cmp_desc = [](const std::optional<double>& x, const std::optional<double>& y) -> int {
    if (x.has_value() != y.has_value()) return x ? -1 : 1;
    if (!x || *x == *y) return 0;
    return *x > *y ? -1 : 1;
  };
  if (int c = cmp_desc(a.f_measure, b.f_measure)) return c < 0;
  if (int c = cmp_desc(a.precision, b.precision)) return c < 0;
  if (a.list_size != b.list_size) return a.list_size < b.list_size;
  return a.list < b.list;
}

inline std::vector<EvalReport> rank_lists(const LabeledCorpus& corpus, std::span<const TermList> lists,
                                          const BinaryTask& task, std::size_t threads = 1) {
  auto reports = parallel_map(lists.size(), threads, [&](std::size_t i) { return evaluate(corpus, lists[i], task); });
  std::stable_sort(reports.begin(), reports.end(), ranks_before);
  return reports;
}

struct SweepRow {
  double threshold = 0;
  std::size_t list_size = 0;
  std::optional<EvalReport> report;
  std::string error;  ///< set when the row could not be evaluated
};

struct SweepResult {
  BinaryTask task;
  MetricCase metric_case = MetricCase::HateOnly;
  std::vector<SweepRow> rows;

  /// (threshold, F) pairs for plotting; F is undefined on error rows.
  std::vector<std::pair<double, std::optional<double>>> f_series() const {
    std::vector<std::pair<double, std::optional<double>>> s;
    for (const auto& r : rows) s.emplace_back(r.threshold, r.report ? r.report->f_measure : std::nullopt);
    return s;
  }

  std::vector<std::pair<double, std::size_t>> size_series() const {
    std::vector<std::pair<double, std::size_t>> s;
    for (const auto& r : rows) s.emplace_back(r.threshold, r.list_size);
    return s;
  }
};

/// Builds one severe list per threshold from the inter-agreement of `lists` and evaluates it.
/// Thresholds that leave the list empty produce a flagged row; the sweep continues.
inline SweepResult sweep_min_offense(const LabeledCorpus& corpus, std::span<const TermList> lists,
                                     const BinaryTask& task, MetricCase mc, std::span<const double> thresholds,
                                     const MetricOptions& opts = {}, std::size_t threads = 1) {
  auto records = inter_agreement(corpus, lists, opts);
  SweepResult result{task, mc, {}};
  result.rows = parallel_map(thresholds.size(), threads, [&](std::size_t i) {
    SweepRow row;
    row.threshold = thresholds[i];
    auto severe = severe_list(records, mc, thresholds[i]);
    row.list_size = severe.size();
    if (severe.empty()) {
      row.error = "empty severe list";
      return row;
    }
    try {
      row.report = evaluate(corpus, severe, task);
    } catch (const EvaluationError& e) {
      row.error = e.what();
    }
    return row;
  });
  return result;
}

}  // namespace lexsev
