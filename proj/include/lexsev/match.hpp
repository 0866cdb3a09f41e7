#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "lexsev/corpus.hpp"
#include "lexsev/term_list.hpp"

namespace lexsev {

/// A matched occurrence: index into the matcher's term list plus the token span.
struct TermSpan {
  std::size_t term = 0;
  std::size_t start = 0;
  std::size_t length = 0;
};

/// Token-level trie over a term list. Scans left to right and at each position takes the
/// longest term starting there, then resumes after it, so nested terms never double-count.
class TermMatcher {
public:
  explicit TermMatcher(const TermList& list) : list_(&list) {
    nodes_.emplace_back();
    for (std::size_t t = 0; t < list.entries().size(); ++t) {
      std::uint32_t node = 0;
      for (const auto& tok : list.entries()[t].tokens) {
        auto it = nodes_[node].children.find(tok);
        if (it == nodes_[node].children.end()) {
          auto next = static_cast<std::uint32_t>(nodes_.size());
          nodes_[node].children.emplace(tok, next);
          nodes_.emplace_back();
          node = next;
        } else {
          node = it->second;
        }
      }
      nodes_[node].term = static_cast<std::int64_t>(t);
    }
  }

  const TermList& list() const { return *list_; }

  std::vector<TermSpan> spans(const std::vector<std::string>& tokens) const {
    std::vector<TermSpan> out;
    std::size_t i = 0;
    while (i < tokens.size()) {
      std::uint32_t node = 0;
      std::int64_t best_term = -1;
      std::size_t best_len = 0;
      for (std::size_t j = i; j < tokens.size(); ++j) {
        auto it = nodes_[node].children.find(tokens[j]);
        if (it == nodes_[node].children.end()) break;
        node = it->second;
        if (nodes_[node].term >= 0) {
          best_term = nodes_[node].term;
          best_len = j - i + 1;
        }
      }
      if (best_term >= 0) {
        out.push_back(TermSpan{static_cast<std::size_t>(best_term), i, best_len});
        i += best_len;
      } else {
        ++i;
      }
    }
    return out;
  }

  bool any(const std::vector<std::string>& tokens) const {
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      std::uint32_t node = 0;
      for (std::size_t j = i; j < tokens.size(); ++j) {
        auto it = nodes_[node].children.find(tokens[j]);
        if (it == nodes_[node].children.end()) break;
        node = it->second;
        if (nodes_[node].term >= 0) return true;
      }
    }
    return false;
  }

private:
  struct Node {
    std::unordered_map<std::string, std::uint32_t> children;
    std::int64_t term = -1;
  };
  const TermList* list_;
  std::vector<Node> nodes_;
};

struct TermMatch {
  std::string term;  // NormalizedTerm::key()
  std::size_t start = 0;
  std::size_t length = 0;

  bool operator==(const TermMatch&) const = default;
};

struct MatchResult {
  std::size_t line_id = 0;
  std::vector<TermMatch> matches;  // in token order

  /// Occurrences of `term` in the line.
  std::size_t frequency(const std::string& term) const {
    std::size_t n = 0;
    for (const auto& m : matches) n += (m.term == term);
    return n;
  }
};

inline MatchResult match_terms(const CorpusLine& line, const TermMatcher& matcher) {
  MatchResult r{line.id, {}};
  for (const auto& s : matcher.spans(line.tokens))
    r.matches.push_back(TermMatch{matcher.list().entries()[s.term].key(), s.start, s.length});
  return r;
}

inline MatchResult match_terms(const CorpusLine& line, const TermList& list) {
  return match_terms(line, TermMatcher(list));
}

struct HistogramBucket {
  std::size_t line_count = 0;
  std::vector<std::size_t> line_ids;
};

/// Lines of one class bucketed by how many term occurrences they contain (N(X)).
/// Only observed counts appear; N(0) is included when some line has no match.
using TermCountHistogram = std::map<std::size_t, HistogramBucket>;

inline TermCountHistogram lines_by_term_count(const LabeledCorpus& corpus, const TermMatcher& matcher,
                                              ClassLabel cls) {
  TermCountHistogram hist;
  for (const auto& line : corpus.lines()) {
    if (line.label != cls) continue;
    auto& bucket = hist[matcher.spans(line.tokens).size()];
    ++bucket.line_count;
    bucket.line_ids.push_back(line.id);
  }
  return hist;
}

inline TermCountHistogram lines_by_term_count(const LabeledCorpus& corpus, const TermList& list, ClassLabel cls) {
  return lines_by_term_count(corpus, TermMatcher(list), cls);
}

}  // namespace lexsev
