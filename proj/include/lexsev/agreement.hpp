#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "lexsev/corpus.hpp"
#include "lexsev/match.hpp"
#include "lexsev/term_list.hpp"
#include "lexsev/text.hpp"

namespace lexsev {

/// Which classes count as positive when scoring a term.
enum class MetricCase { HateOnly, HatePlusRelative };

inline constexpr std::array<MetricCase, 2> kAllMetricCases{MetricCase::HateOnly, MetricCase::HatePlusRelative};

inline std::size_t index_of(MetricCase c) { return static_cast<std::size_t>(c); }

inline ClassSet positive_classes(MetricCase c) {
  return c == MetricCase::HateOnly ? ClassSet{ClassLabel::Hate} : ClassSet{ClassLabel::Hate, ClassLabel::RelativeHate};
}

inline std::string_view to_string(MetricCase c) { return c == MetricCase::HateOnly ? "hate" : "hate_plus_relative"; }
inline std::string_view display_name(MetricCase c) { return c == MetricCase::HateOnly ? "Hate" : "Hate+Relative"; }

enum class RelativenessMode {
  RatioBounded,  ///< p / (p + n) over line counts, negative side = No-hate lines
  Prose,         ///< frequency ratio with Relative-hate in the HateOnly denominator; unbounded
};

enum class MeanKind { Harmonic, Geometric };

struct MetricOptions {
  RelativenessMode relativeness = RelativenessMode::RatioBounded;
  MeanKind mean = MeanKind::Harmonic;
};

/// Occurrence and line counts of one term in every class of one corpus.
struct TermClassStats {
  NormalizedTerm term;
  PerClass<std::uint64_t> freq{};
  PerClass<std::uint64_t> lines{};
  PerClass<std::uint64_t> class_size{};

  std::uint64_t total_freq() const { return freq.values[0] + freq.values[1] + freq.values[2]; }

  /// 100 * lines / class size; undefined for an empty class.
  std::optional<double> percent_lines(ClassLabel c) const {
    if (class_size[c] == 0) return std::nullopt;
    return 100.0 * static_cast<double>(lines[c]) / static_cast<double>(class_size[c]);
  }

  std::uint64_t lines_in(ClassSet side) const {
    std::uint64_t n = 0;
    for (auto c : kAllClasses)
      if (side.contains(c)) n += lines[c];
    return n;
  }
};

struct TermStatsTable {
  std::string corpus;
  std::string list;
  PerClass<std::uint64_t> class_sizes{};
  std::vector<TermClassStats> terms;           ///< terms with >= 1 occurrence, sorted by key
  std::vector<NormalizedTerm> zero_frequency;  ///< list terms never seen, sorted by key

  const TermClassStats* find(const std::string& key) const {
    auto it = std::lower_bound(terms.begin(), terms.end(), key,
                               [](const TermClassStats& s, const std::string& k) { return s.term.key() < k; });
    return (it != terms.end() && it->term.key() == key) ? &*it : nullptr;
  }
};

inline TermStatsTable term_class_stats(const LabeledCorpus& corpus, const TermMatcher& matcher) {
  const auto& entries = matcher.list().entries();
  std::vector<TermClassStats> all(entries.size());
  PerClass<std::uint64_t> sizes{};
  for (auto c : kAllClasses) sizes[c] = corpus.class_size(c);
  for (std::size_t t = 0; t < entries.size(); ++t) {
    all[t].term = entries[t];
    all[t].class_size = sizes;
  }
  std::vector<std::size_t> seen_in_line;
  for (const auto& line : corpus.lines()) {
    seen_in_line.clear();
    for (const auto& s : matcher.spans(line.tokens)) {
      ++all[s.term].freq[line.label];
      if (std::find(seen_in_line.begin(), seen_in_line.end(), s.term) == seen_in_line.end()) {
        seen_in_line.push_back(s.term);
        ++all[s.term].lines[line.label];
      }
    }
  }
  TermStatsTable table;
  table.corpus = corpus.name();
  table.list = matcher.list().name();
  table.class_sizes = sizes;
  for (auto& s : all) {
    if (s.total_freq() > 0) table.terms.push_back(std::move(s));
    else table.zero_frequency.push_back(std::move(s.term));
  }
  std::sort(table.terms.begin(), table.terms.end(),
            [](const TermClassStats& a, const TermClassStats& b) { return a.term.key() < b.term.key(); });
  std::sort(table.zero_frequency.begin(), table.zero_frequency.end(),
            [](const NormalizedTerm& a, const NormalizedTerm& b) { return a.key() < b.key(); });
  return table;
}

inline TermStatsTable term_class_stats(const LabeledCorpus& corpus, const TermList& list) {
  return term_class_stats(corpus, TermMatcher(list));
}

struct RankedTerm {
  std::string term;
  std::uint64_t freq = 0;

  bool operator==(const RankedTerm&) const = default;
};

/// The k most frequent terms of a class; ties broken by term key.
inline std::vector<RankedTerm> top_terms(const TermStatsTable& stats, ClassLabel cls, std::size_t k) {
  std::vector<RankedTerm> ranked;
  for (const auto& s : stats.terms)
    if (s.freq[cls] > 0) ranked.push_back(RankedTerm{s.term.key(), s.freq[cls]});
  std::sort(ranked.begin(), ranked.end(), [](const RankedTerm& a, const RankedTerm& b) {
    return a.freq != b.freq ? a.freq > b.freq : a.term < b.term;
  });
  if (ranked.size() > k) ranked.resize(k);
  return ranked;
}

enum class JoinValue { Frequency, PercentLines };

/// One row of a term x class outer join. A cell is missing when the term never occurs in that class.
struct OuterJoinRow {
  std::string term;
  PerClass<std::optional<double>> cells{};
};

inline std::vector<OuterJoinRow> outer_join(const TermStatsTable& stats, JoinValue value) {
  std::vector<OuterJoinRow> rows;
  rows.reserve(stats.terms.size());
  for (const auto& s : stats.terms) {
    OuterJoinRow row{s.term.key(), {}};
    for (auto c : kAllClasses) {
      if (s.freq[c] == 0) continue;
      row.cells[c] = value == JoinValue::Frequency ? std::optional<double>(static_cast<double>(s.freq[c]))
                                                   : s.percent_lines(c);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Severity metrics

/// 1 when the term occurs in at least one positive-class line.
inline int hatefulness(std::uint64_t positive_lines) { return positive_lines > 0 ? 1 : 0; }

inline int hatefulness(const TermClassStats& s, MetricCase mc) { return hatefulness(s.lines_in(positive_classes(mc))); }

/// p / (p + n); undefined when both are zero.
inline std::optional<double> relativeness_ratio(std::uint64_t positive, std::uint64_t negative) {
  if (positive + negative == 0) return std::nullopt;
  return static_cast<double>(positive) / static_cast<double>(positive + negative);
}

/// numerator / denominator; undefined for 0/0, +inf for x/0.
inline std::optional<double> relativeness_prose(std::uint64_t numerator, std::uint64_t denominator) {
  if (numerator == 0 && denominator == 0) return std::nullopt;
  if (denominator == 0) return std::numeric_limits<double>::infinity();
  return static_cast<double>(numerator) / static_cast<double>(denominator);
}

inline std::optional<double> relativeness(const TermClassStats& s, MetricCase mc,
                                          RelativenessMode mode = RelativenessMode::RatioBounded) {
  if (mode == RelativenessMode::RatioBounded)
    return relativeness_ratio(s.lines_in(positive_classes(mc)), s.lines[ClassLabel::NoHate]);
  if (mc == MetricCase::HateOnly)
    return relativeness_prose(s.freq[ClassLabel::Hate], s.freq[ClassLabel::RelativeHate] + s.freq[ClassLabel::NoHate]);
  return relativeness_prose(s.freq[ClassLabel::Hate] + s.freq[ClassLabel::RelativeHate], s.freq[ClassLabel::NoHate]);
}

/// Harmonic (default) or geometric mean of hatefulness and relativeness.
inline std::optional<double> offensiveness(int h, std::optional<double> r, MeanKind mean = MeanKind::Harmonic) {
  if (!r) return std::nullopt;
  const double hv = h;
  const double rv = *r;
  if (mean == MeanKind::Geometric) {
    if (std::isinf(rv)) return hv > 0 ? std::optional<double>(rv) : std::optional<double>(0.0);
    return std::sqrt(hv * rv);
  }
  if (hv + rv == 0.0) return std::nullopt;
  if (std::isinf(rv)) return 2.0 * hv;
  return 2.0 * hv * rv / (hv + rv);
}

/// Metrics of one term under one metric case, with the counts behind them.
struct CaseMetrics {
  int hatefulness = 0;
  std::optional<double> relativeness;
  std::optional<double> offensiveness;
  std::uint64_t positive_lines = 0;
  std::uint64_t negative_lines = 0;
  std::uint64_t positive_class_size = 0;
  std::uint64_t negative_class_size = 0;
};

inline CaseMetrics case_metrics(const TermClassStats& s, MetricCase mc, const MetricOptions& opts) {
  CaseMetrics m;
  ClassSet pos = positive_classes(mc);
  m.positive_lines = s.lines_in(pos);
  m.negative_lines = s.lines[ClassLabel::NoHate];
  for (auto c : kAllClasses)
    if (pos.contains(c)) m.positive_class_size += s.class_size[c];
  m.negative_class_size = s.class_size[ClassLabel::NoHate];
  m.hatefulness = hatefulness(s, mc);
  m.relativeness = relativeness(s, mc, opts.relativeness);
  m.offensiveness = offensiveness(m.hatefulness, m.relativeness, opts.mean);
  return m;
}

struct IntraAgreementRecord {
  NormalizedTerm term;
  std::array<CaseMetrics, 2> cases{};

  const CaseMetrics& at(MetricCase mc) const { return cases[index_of(mc)]; }
};

/// One record per list term occurring in the corpus, both metric cases filled.
inline std::vector<IntraAgreementRecord> intra_agreement(const LabeledCorpus& corpus, const TermList& list,
                                                         const MetricOptions& opts = {}) {
  auto stats = term_class_stats(corpus, list);
  std::vector<IntraAgreementRecord> out;
  out.reserve(stats.terms.size());
  for (const auto& s : stats.terms) {
    IntraAgreementRecord r{s.term, {}};
    for (auto mc : kAllMetricCases) r.cases[index_of(mc)] = case_metrics(s, mc, opts);
    out.push_back(std::move(r));
  }
  return out;
}

struct InterAgreementRecord {
  NormalizedTerm term;
  std::array<CaseMetrics, 2> cases{};
  std::vector<std::string> membership;  ///< names of the lists containing the term, input order

  const CaseMetrics& at(MetricCase mc) const { return cases[index_of(mc)]; }
};

/// Union of the given lists, in list order then entry order.
inline TermList union_list(std::span<const TermList> lists, std::string name = "Union") {
  TermList u(std::move(name));
  for (const auto& l : lists)
    for (const auto& e : l.entries()) u.add(e);
  return u;
}

/// Metrics over the merged lexicon, computed once per term against the corpus, plus membership.
inline std::vector<InterAgreementRecord> inter_agreement(const LabeledCorpus& corpus, std::span<const TermList> lists,
                                                         const MetricOptions& opts = {}) {
  TermList merged = union_list(lists);
  auto stats = term_class_stats(corpus, merged);
  std::vector<InterAgreementRecord> out;
  out.reserve(stats.terms.size());
  for (const auto& s : stats.terms) {
    InterAgreementRecord r{s.term, {}, {}};
    for (auto mc : kAllMetricCases) r.cases[index_of(mc)] = case_metrics(s, mc, opts);
    const auto key = s.term.key();
    for (const auto& l : lists)
      if (l.contains(key)) r.membership.push_back(l.name());
    out.push_back(std::move(r));
  }
  return out;
}

/// "Offensiveness(Hate)(0.7)"
inline std::string severe_list_name(MetricCase mc, double min_offense) {
  return "Offensiveness(" + std::string(display_name(mc)) + ")(" + text::format_compact(min_offense) + ")";
}

/// Terms whose offensiveness is defined and strictly above `min_offense`, most offensive first.
inline TermList severe_list(std::span<const InterAgreementRecord> records, MetricCase mc, double min_offense) {
  std::vector<const InterAgreementRecord*> kept;
  for (const auto& r : records) {
    const auto& o = r.at(mc).offensiveness;
    if (o && *o > min_offense) kept.push_back(&r);
  }
  std::stable_sort(kept.begin(), kept.end(), [mc](const InterAgreementRecord* a, const InterAgreementRecord* b) {
    double oa = *a->at(mc).offensiveness, ob = *b->at(mc).offensiveness;
    return oa != ob ? oa > ob : a->term.key() < b->term.key();
  });
  TermList out(severe_list_name(mc, min_offense));
  for (const auto* r : kept) out.add(r->term);
  return out;
}

/// Severe-list metadata written next to the term file.
inline nlohmann::json severe_list_sidecar(const TermList& severe, MetricCase mc, double min_offense,
                                          std::span<const TermList> sources, const std::string& corpus) {
  nlohmann::json j;
  j["name"] = severe.name();
  j["corpus"] = corpus;
  j["case"] = std::string(to_string(mc));
  j["min_offense"] = min_offense;
  j["comparison"] = "offensiveness > min_offense";
  j["term_count"] = severe.size();
  nlohmann::json src = nlohmann::json::array();
  for (const auto& l : sources) src.push_back({{"name", l.name()}, {"size", l.size()}});
  j["source_lists"] = src;
  return j;
}

struct SummaryRow {
  std::string corpus;
  ClassLabel cls = ClassLabel::Hate;
  std::string list;
  std::size_t n_terms = 0;
  std::uint64_t entries = 0;
  std::uint64_t total_lines = 0;

  double percent() const { return total_lines ? 100.0 * entries / static_cast<double>(total_lines) : 0.0; }
};

/// Lines containing exactly N term occurrences, for every (corpus class, list, observed N).
inline std::vector<SummaryRow> summary_n_hate_terms(std::span<const LabeledCorpus> corpora,
                                                    std::span<const TermList> lists) {
  std::vector<SummaryRow> rows;
  std::vector<TermMatcher> matchers;
  matchers.reserve(lists.size());
  for (const auto& list : lists) matchers.emplace_back(list);
  for (const auto& corpus : corpora) {
    for (auto cls : kAllClasses) {
      if (corpus.class_size(cls) == 0) continue;
      for (const auto& matcher : matchers) {
        for (const auto& [n, bucket] : lines_by_term_count(corpus, matcher, cls))
          rows.push_back(SummaryRow{corpus.name(), cls, matcher.list().name(), n, bucket.line_count,
                                    corpus.class_size(cls)});
      }
    }
  }
  return rows;
}

}  // namespace lexsev
