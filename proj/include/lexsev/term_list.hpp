#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "lexsev/errors.hpp"
#include "lexsev/labels.hpp"
#include "lexsev/normalize.hpp"
#include "lexsev/text.hpp"

namespace lexsev {

/// A lexicon entry: its source spelling and the normalized token sequence used for matching.
struct NormalizedTerm {
  std::string raw;
  std::vector<std::string> tokens;

  /// Identity of the term: tokens joined by a single space.
  std::string key() const { return text::join(tokens, " "); }

  bool operator==(const NormalizedTerm& o) const { return tokens == o.tokens; }
};

/// What an ingestion step kept and dropped. Serialized next to artifacts.
struct IngestionReport {
  std::string source;
  std::string kind;  // "term_list" | "corpus"
  std::size_t records_read = 0;
  std::size_t records_kept = 0;
  std::vector<std::string> dropped_duplicates;
  std::vector<std::string> dropped_empty;
  std::vector<std::string> unmapped_labels;
  PerClass<std::size_t> lines_per_class;

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["source"] = source;
    j["kind"] = kind;
    j["records_read"] = records_read;
    j["records_kept"] = records_kept;
    j["dropped_duplicates"] = dropped_duplicates;
    j["dropped_empty"] = dropped_empty;
    j["unmapped_labels"] = unmapped_labels;
    if (kind == "corpus") {
      nlohmann::json per;
      for (auto c : kAllClasses) per[std::string(to_string(c))] = lines_per_class[c];
      j["lines_per_class"] = per;
    }
    return j;
  }
};

/// Named lexicon with unique normalized entries, in first-seen order.
class TermList {
public:
  TermList() = default;
  explicit TermList(std::string name) : name_(std::move(name)) {}

  /// Normalizes and deduplicates `raw_terms`. Entries that normalize to nothing or to
  /// stop-words only are dropped and reported.
  static TermList from_strings(std::string name, const std::vector<std::string>& raw_terms,
                               const Normalizer& normalizer, IngestionReport* report = nullptr) {
    TermList list(std::move(name));
    IngestionReport local;
    IngestionReport& rep = report ? *report : local;
    rep.kind = "term_list";
    for (const auto& raw : raw_terms) {
      ++rep.records_read;
      auto tokens = normalizer(raw);
      if (tokens.empty() || normalizer.only_stop_words(raw)) {
        rep.dropped_empty.push_back(raw);
        continue;
      }
      if (!list.add(NormalizedTerm{std::string(text::trim(raw)), std::move(tokens)}))
        rep.dropped_duplicates.push_back(raw);
    }
    rep.records_kept = list.size();
    return list;
  }

  /// Adds a term unless an entry with the same tokens exists. Returns whether it was added.
  bool add(NormalizedTerm term) {
    if (term.tokens.empty()) return false;
    auto key = term.key();
    if (index_.count(key)) return false;
    index_.emplace(std::move(key), entries_.size());
    entries_.push_back(std::move(term));
    return true;
  }

  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }
  const std::vector<NormalizedTerm>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  bool contains(const std::string& key) const { return index_.count(key) > 0; }

  const NormalizedTerm* find(const std::string& key) const {
    auto it = index_.find(key);
    return it == index_.end() ? nullptr : &entries_[it->second];
  }

private:
  std::string name_;
  std::vector<NormalizedTerm> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Entity lists (contextual keywords) obey the same invariants as term lists.
using EntityList = TermList;

inline std::string read_utf8_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestionError("cannot read file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string data = buf.str();
  if (auto bad = text::find_invalid_utf8(data))
    throw IngestionError(path.string() + ": invalid UTF-8 at byte offset " + std::to_string(*bad));
  return data;
}

/// One term per line; blank lines and lines starting with '#' are ignored.
inline TermList load_term_list(const std::filesystem::path& path, std::string name, const Normalizer& normalizer,
                               IngestionReport* report = nullptr) {
  std::string data = read_utf8_file(path);
  std::vector<std::string> raw_terms;
  std::istringstream lines{std::string(text::strip_bom(data))};
  for (std::string line; std::getline(lines, line);) {
    auto t = text::trim(line);
    if (t.empty() || t.front() == '#') continue;
    raw_terms.emplace_back(t);
  }
  IngestionReport local;
  IngestionReport& rep = report ? *report : local;
  rep.source = path.string();
  auto list = TermList::from_strings(std::move(name), raw_terms, normalizer, &rep);
  if (list.empty()) throw IngestionError(path.string() + ": empty term list");
  return list;
}

}  // namespace lexsev
