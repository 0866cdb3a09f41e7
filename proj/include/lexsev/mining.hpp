#pragma once

// Rule mining over sequence databases.
//
// Ordered mode follows RuleGrowth semantics: a sequence supports X -> Y when every item
// of X occurs and every item of Y occurs after all of X, i.e.
//   max_{x in X} first(x) < min_{y in Y} last(y).
// Unordered mode only requires every item of X and Y to occur.
//
// Rules are grown from item pairs by left expansion (add an antecedent item larger
// than the current largest) and right expansion (same for the consequent). A rule
// reached by a left expansion is only expanded further to the left, so every (X, Y)
// is generated exactly once. Support is anti-monotone in both directions, which makes
// minSup a safe pruning bound.

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "lexsev/agreement.hpp"
#include "lexsev/corpus.hpp"
#include "lexsev/errors.hpp"
#include "lexsev/match.hpp"
#include "lexsev/parallel.hpp"
#include "lexsev/term_list.hpp"

namespace lexsev {

using Sequence = std::vector<std::string>;

/// Sorted, duplicate-free set of items.
using Itemset = std::vector<std::string>;

struct SequenceDatabase {
  std::string name;
  std::vector<Sequence> sequences;

  std::size_t size() const { return sequences.size(); }
  bool empty() const { return sequences.empty(); }

  std::set<std::string> alphabet() const {
    std::set<std::string> a;
    for (const auto& s : sequences) a.insert(s.begin(), s.end());
    return a;
  }
};

/// Plain-text database: '#' header lines, then one sequence per line with space-separated
/// items. There are no itemset separators; every position holds a single item.
inline void write_sequence_database(std::ostream& os, const SequenceDatabase& db) {
  os << "# lexsev sequence database v1\n";
  os << "# name: " << db.name << "\n";
  os << "# sequences: " << db.size() << "\n";
  os << "# format: one sequence per line, items separated by single spaces, multi-word terms joined by '_'\n";
  for (const auto& s : db.sequences) os << text::join(s, " ") << "\n";
}

inline SequenceDatabase read_sequence_database(std::istream& is, std::string name) {
  SequenceDatabase db{std::move(name), {}};
  for (std::string line; std::getline(is, line);) {
    auto t = text::trim(line);
    if (t.empty() || t.front() == '#') continue;
    Sequence seq;
    std::size_t pos = 0;
    while (pos < t.size()) {
      auto end = t.find_first_of(" \t", pos);
      if (end == std::string_view::npos) end = t.size();
      if (end > pos) seq.emplace_back(t.substr(pos, end - pos));
      pos = end + 1;
    }
    db.sequences.push_back(std::move(seq));
  }
  return db;
}

/// Database token for a matched term: the entry's lowercased surface tokens joined by '_'
/// ("White Tr*sh" -> "white_tr*sh"), so rules read in unstemmed words.
inline std::string sequence_token(const NormalizedTerm& term) {
  auto surface = tokenize(term.raw);
  return text::join(surface.empty() ? term.tokens : surface, "_");
}

/// Reduces each line of the selected classes to the ordered lexicon terms it contains
/// (terms first, then entities, matched jointly with the longest-match policy).
/// Lines without any lexicon token are dropped.
inline SequenceDatabase build_rep_database(const LabeledCorpus& corpus, const TermList& terms,
                                           const EntityList& entities,
                                           ClassSet classes = {ClassLabel::Hate, ClassLabel::RelativeHate},
                                           std::string name = {}) {
  TermList lexicon("lexicon");
  for (const auto& e : terms.entries()) lexicon.add(e);
  for (const auto& e : entities.entries()) lexicon.add(e);
  std::vector<std::string> tokens;
  tokens.reserve(lexicon.size());
  for (const auto& e : lexicon.entries()) tokens.push_back(sequence_token(e));

  TermMatcher matcher(lexicon);
  SequenceDatabase db{name.empty() ? corpus.name() : std::move(name), {}};
  for (const auto& line : corpus.lines()) {
    if (!classes.contains(line.label)) continue;
    Sequence seq;
    for (const auto& s : matcher.spans(line.tokens)) seq.push_back(tokens[s.term]);
    if (!seq.empty()) db.sequences.push_back(std::move(seq));
  }
  return db;
}

enum class MiningMode { Ordered, Unordered };

/// Confidence denominator for ordered rules. Unordered rules always use item support.
enum class ConfidenceDenominator {
  AntecedentQualified,  ///< sequences where X completes before the last position
  ItemSupport,          ///< sequences containing all of X
};

/// Absolute count, or a fraction of the database size resolved per database.
class SupportThreshold {
public:
  SupportThreshold(std::uint64_t count = 1) : value_(static_cast<double>(count)) {}  // NOLINT(implicit)

  static SupportThreshold fraction(double f) {
    SupportThreshold t;
    t.value_ = f;
    t.fraction_ = true;
    return t;
  }

  bool is_fraction() const { return fraction_; }
  double value() const { return value_; }

  std::uint64_t resolve(std::size_t db_size) const {
    if (!fraction_) return static_cast<std::uint64_t>(value_);
    return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(value_ * static_cast<double>(db_size))));
  }

private:
  double value_ = 1;
  bool fraction_ = false;
};

struct MiningParams {
  SupportThreshold min_support{1};
  double min_confidence = 0.0;
  std::size_t max_antecedent = 4;
  std::size_t max_consequent = 4;
  ConfidenceDenominator denominator = ConfidenceDenominator::AntecedentQualified;

  void validate() const {
    if (min_support.is_fraction()) {
      if (!(min_support.value() > 0.0 && min_support.value() <= 1.0))
        throw ConfigError("minSup fraction must be in (0, 1]");
    } else if (min_support.value() < 1) {
      throw ConfigError("minSup must be >= 1");
    }
    if (!(min_confidence >= 0.0 && min_confidence <= 1.0)) throw ConfigError("minConf must be in [0, 1]");
    if (max_antecedent < 1 || max_consequent < 1) throw ConfigError("rule size caps must be >= 1");
  }
};

struct RuleKey {
  Itemset antecedent;
  Itemset consequent;

  auto operator<=>(const RuleKey&) const = default;
  bool operator==(const RuleKey&) const = default;

  /// "[a, b] -> [c]"
  std::string to_string() const {
    return "[" + text::join(antecedent, ", ") + "] -> [" + text::join(consequent, ", ") + "]";
  }
};

struct HateRule {
  Itemset antecedent;
  Itemset consequent;
  std::uint64_t support = 0;
  double confidence = 0.0;
  std::uint64_t antecedent_count = 0;  ///< confidence denominator

  RuleKey key() const { return RuleKey{antecedent, consequent}; }
};

namespace mining_detail {

struct Occurrence {
  int item;
  int first;
  int last;
};

struct IndexedSequence {
  std::vector<Occurrence> items;  // sorted by item id
  int length = 0;

  const Occurrence* find(int item) const {
    auto it = std::lower_bound(items.begin(), items.end(), item,
                               [](const Occurrence& o, int v) { return o.item < v; });
    return (it != items.end() && it->item == item) ? &*it : nullptr;
  }
};

/// Item ids follow lexicographic order of the item strings.
struct IndexedDatabase {
  std::vector<std::string> alphabet;
  std::vector<IndexedSequence> sequences;
  std::vector<std::vector<std::uint32_t>> tidsets;

  explicit IndexedDatabase(const SequenceDatabase& db) {
    auto a = db.alphabet();
    alphabet.assign(a.begin(), a.end());
    tidsets.resize(alphabet.size());
    sequences.reserve(db.size());
    for (std::uint32_t sid = 0; sid < db.size(); ++sid) {
      const auto& seq = db.sequences[sid];
      std::map<int, Occurrence> occ;
      for (int pos = 0; pos < static_cast<int>(seq.size()); ++pos) {
        int id = static_cast<int>(std::lower_bound(alphabet.begin(), alphabet.end(), seq[pos]) - alphabet.begin());
        auto [it, inserted] = occ.try_emplace(id, Occurrence{id, pos, pos});
        if (!inserted) it->second.last = pos;
      }
      IndexedSequence is;
      is.length = static_cast<int>(seq.size());
      for (const auto& [id, o] : occ) {
        is.items.push_back(o);
        tidsets[id].push_back(sid);
      }
      sequences.push_back(std::move(is));
    }
  }
};

class RuleMiner {
public:
  RuleMiner(const IndexedDatabase& db, MiningMode mode, const MiningParams& params, std::uint64_t min_support)
      : db_(db), ordered_(mode == MiningMode::Ordered), params_(params), min_support_(min_support) {}

  std::vector<HateRule> run() {
    const int n_items = static_cast<int>(db_.alphabet.size());
    for (int i = 0; i < n_items; ++i) {
      if (db_.tidsets[i].size() < min_support_) continue;
      std::map<int, std::vector<Support>> by_consequent;
      for (auto sid : db_.tidsets[i]) {
        const auto& seq = db_.sequences[sid];
        const int first_i = seq.find(i)->first;
        for (const auto& o : seq.items) {
          if (o.item == i) continue;
          if (ordered_ && !(first_i < o.last)) continue;
          by_consequent[o.item].push_back(Support{sid, first_i, o.last});
        }
      }
      for (auto& [j, sup] : by_consequent) {
        if (sup.size() < min_support_) continue;
        std::vector<int> x{i}, y{j};
        emit(x, y, sup.size());
        if (params_.max_consequent > 1) expand_right(x, y, sup);
        if (params_.max_antecedent > 1) expand_left(x, y, sup);
      }
    }
    std::sort(rules_.begin(), rules_.end(),
              [](const HateRule& a, const HateRule& b) { return a.key() < b.key(); });
    return std::move(rules_);
  }

private:
  struct Support {
    std::uint32_t sid;
    int max_first_x;
    int min_last_y;
  };

  static bool contains(const std::vector<int>& sorted, int v) {
    return std::binary_search(sorted.begin(), sorted.end(), v);
  }

  void expand_left(const std::vector<int>& x, const std::vector<int>& y, const std::vector<Support>& sup) {
    std::map<int, std::vector<Support>> cands;
    for (const auto& s : sup) {
      const auto& seq = db_.sequences[s.sid];
      auto it = std::upper_bound(seq.items.begin(), seq.items.end(), x.back(),
                                 [](int v, const Occurrence& o) { return v < o.item; });
      for (; it != seq.items.end(); ++it) {
        if (contains(y, it->item)) continue;
        if (ordered_ && !(it->first < s.min_last_y)) continue;
        cands[it->item].push_back(Support{s.sid, std::max(s.max_first_x, it->first), s.min_last_y});
      }
    }
    for (auto& [c, next] : cands) {
      if (next.size() < min_support_) continue;
      auto nx = x;
      nx.push_back(c);
      emit(nx, y, next.size());
      if (nx.size() < params_.max_antecedent) expand_left(nx, y, next);
    }
  }

  void expand_right(const std::vector<int>& x, const std::vector<int>& y, const std::vector<Support>& sup) {
    std::map<int, std::vector<Support>> cands;
    for (const auto& s : sup) {
      const auto& seq = db_.sequences[s.sid];
      auto it = std::upper_bound(seq.items.begin(), seq.items.end(), y.back(),
                                 [](int v, const Occurrence& o) { return v < o.item; });
      for (; it != seq.items.end(); ++it) {
        if (contains(x, it->item)) continue;
        if (ordered_ && !(it->last > s.max_first_x)) continue;
        cands[it->item].push_back(Support{s.sid, s.max_first_x, std::min(s.min_last_y, it->last)});
      }
    }
    for (auto& [c, next] : cands) {
      if (next.size() < min_support_) continue;
      auto ny = y;
      ny.push_back(c);
      emit(x, ny, next.size());
      if (ny.size() < params_.max_consequent) expand_right(x, ny, next);
      if (x.size() < params_.max_antecedent) expand_left(x, ny, next);
    }
  }

  /// (sequences containing X, sequences where X completes before the last position)
  std::pair<std::uint64_t, std::uint64_t> antecedent_counts(const std::vector<int>& x) {
    auto it = antecedent_cache_.find(x);
    if (it != antecedent_cache_.end()) return it->second;
    const auto* smallest = &db_.tidsets[x.front()];
    for (int item : x)
      if (db_.tidsets[item].size() < smallest->size()) smallest = &db_.tidsets[item];
    std::uint64_t containing = 0, qualified = 0;
    for (auto sid : *smallest) {
      const auto& seq = db_.sequences[sid];
      int max_first = -1;
      bool all = true;
      for (int item : x) {
        const auto* o = seq.find(item);
        if (!o) {
          all = false;
          break;
        }
        max_first = std::max(max_first, o->first);
      }
      if (!all) continue;
      ++containing;
      if (max_first < seq.length - 1) ++qualified;
    }
    return antecedent_cache_[x] = {containing, qualified};
  }

  void emit(const std::vector<int>& x, const std::vector<int>& y, std::uint64_t support) {
    auto [containing, qualified] = antecedent_counts(x);
    const bool use_qualified = ordered_ && params_.denominator == ConfidenceDenominator::AntecedentQualified;
    const std::uint64_t denom = use_qualified ? qualified : containing;
    const double conf = denom ? static_cast<double>(support) / static_cast<double>(denom) : 0.0;
    if (conf < params_.min_confidence) return;
    HateRule r;
    for (int i : x) r.antecedent.push_back(db_.alphabet[i]);
    for (int i : y) r.consequent.push_back(db_.alphabet[i]);
    r.support = support;
    r.confidence = conf;
    r.antecedent_count = denom;
    rules_.push_back(std::move(r));
  }

  const IndexedDatabase& db_;
  bool ordered_;
  const MiningParams& params_;
  std::uint64_t min_support_;
  std::map<std::vector<int>, std::pair<std::uint64_t, std::uint64_t>> antecedent_cache_;
  std::vector<HateRule> rules_;
};

}  // namespace mining_detail

/// All rules with support >= minSup and confidence >= minConf, sorted by (antecedent, consequent).
inline std::vector<HateRule> mine_rules(const SequenceDatabase& db, const MiningParams& params, MiningMode mode) {
  params.validate();
  mining_detail::IndexedDatabase index(db);
  return mining_detail::RuleMiner(index, mode, params, params.min_support.resolve(db.size())).run();
}

inline std::vector<HateRule> mine_unordered_rules(const SequenceDatabase& db, const MiningParams& params) {
  return mine_rules(db, params, MiningMode::Unordered);
}

inline std::vector<HateRule> mine_ordered_rules(const SequenceDatabase& db, const MiningParams& params) {
  return mine_rules(db, params, MiningMode::Ordered);
}

struct RuleMeasure {
  std::uint64_t support = 0;
  std::uint64_t antecedent_count = 0;
  double confidence = 0.0;
};

/// Support and confidence of one given rule on a database, without mining.
inline RuleMeasure measure_rule(const SequenceDatabase& db, const RuleKey& rule, MiningMode mode,
                                ConfidenceDenominator denominator = ConfidenceDenominator::AntecedentQualified) {
  RuleMeasure m;
  const bool ordered = mode == MiningMode::Ordered;
  for (const auto& seq : db.sequences) {
    int max_first_x = -1;
    bool has_x = true;
    for (const auto& x : rule.antecedent) {
      auto it = std::find(seq.begin(), seq.end(), x);
      if (it == seq.end()) {
        has_x = false;
        break;
      }
      max_first_x = std::max(max_first_x, static_cast<int>(it - seq.begin()));
    }
    if (!has_x) continue;
    const bool qualified = max_first_x < static_cast<int>(seq.size()) - 1;
    if (ordered && denominator == ConfidenceDenominator::AntecedentQualified) m.antecedent_count += qualified;
    else ++m.antecedent_count;

    int min_last_y = static_cast<int>(seq.size());
    bool has_y = true;
    for (const auto& y : rule.consequent) {
      auto it = std::find(seq.rbegin(), seq.rend(), y);
      if (it == seq.rend()) {
        has_y = false;
        break;
      }
      min_last_y = std::min(min_last_y, static_cast<int>(seq.rend() - it) - 1);
    }
    if (has_y && (!ordered || max_first_x < min_last_y)) ++m.support;
  }
  if (m.antecedent_count) m.confidence = static_cast<double>(m.support) / static_cast<double>(m.antecedent_count);
  return m;
}

/// Support/confidence of a rule in one database of a stability join.
struct DatabaseCell {
  std::uint64_t support = 0;
  std::uint64_t antecedent_count = 0;
  double confidence = 0.0;
  bool qualified = false;
};

struct StableHateRule {
  Itemset antecedent;
  Itemset consequent;
  std::vector<std::optional<DatabaseCell>> per_db;  ///< absent when the rule has no support there
  std::size_t stability = 0;                        ///< databases where the rule qualified
  bool stable = false;

  RuleKey key() const { return RuleKey{antecedent, consequent}; }
};

struct StableRuleSet {
  std::vector<std::string> databases;
  std::size_t min_stability = 1;
  std::vector<StableHateRule> rules;  ///< outer join: every rule qualified in at least one database

  std::vector<StableHateRule> stable_rules() const {
    std::vector<StableHateRule> out;
    for (const auto& r : rules)
      if (r.stable) out.push_back(r);
    return out;
  }
};

/// Mines every database, joins the rules by identity and counts in how many databases each
/// rule meets minSup and minConf. Rules with stability >= minStab are stable.
inline StableRuleSet stable_rules(std::span<const SequenceDatabase> dbs, const MiningParams& params,
                                  std::size_t min_stability, MiningMode mode, std::size_t threads = 1) {
  params.validate();
  if (dbs.empty()) throw ConfigError("stable rule mining needs at least one database");
  if (min_stability < 1) throw ConfigError("minStab must be >= 1");
  if (min_stability > dbs.size())
    throw ConfigError("minStab " + std::to_string(min_stability) + " exceeds the number of databases (" +
                      std::to_string(dbs.size()) + ")");

  auto per_db = parallel_map(dbs.size(), threads, [&](std::size_t i) { return mine_rules(dbs[i], params, mode); });

  std::map<RuleKey, StableHateRule> joined;
  for (std::size_t d = 0; d < dbs.size(); ++d) {
    for (const auto& r : per_db[d]) {
      auto [it, inserted] = joined.try_emplace(r.key());
      auto& sr = it->second;
      if (inserted) {
        sr.antecedent = r.antecedent;
        sr.consequent = r.consequent;
        sr.per_db.resize(dbs.size());
      }
      sr.per_db[d] = DatabaseCell{r.support, r.antecedent_count, r.confidence, true};
    }
  }

  StableRuleSet result;
  result.min_stability = min_stability;
  for (const auto& db : dbs) result.databases.push_back(db.name);
  for (auto& [key, sr] : joined) {
    for (std::size_t d = 0; d < dbs.size(); ++d) {
      if (sr.per_db[d]) continue;
      auto m = measure_rule(dbs[d], key, mode, params.denominator);
      if (m.support == 0) continue;
      const bool q = m.support >= params.min_support.resolve(dbs[d].size()) && m.confidence >= params.min_confidence;
      sr.per_db[d] = DatabaseCell{m.support, m.antecedent_count, m.confidence, q};
    }
    sr.stability = 0;
    for (const auto& c : sr.per_db) sr.stability += (c && c->qualified);
    sr.stable = sr.stability >= min_stability;
    result.rules.push_back(std::move(sr));
  }
  return result;
}

}  // namespace lexsev
