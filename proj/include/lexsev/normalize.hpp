#pragma once

#include <regex>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "lexsev/porter.hpp"
#include "lexsev/text.hpp"

namespace lexsev {

enum class Stemmer { Porter, None };

/// English stop-words (NLTK list) plus apostrophe-free contraction spellings.
inline const std::unordered_set<std::string>& english_stop_words() {
  static const std::unordered_set<std::string> words = {
      "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you", "your", "yours", "yourself",
      "yourselves", "he", "him", "his", "himself", "she", "her", "hers", "herself", "it", "its", "itself",
      "they", "them", "their", "theirs", "themselves", "what", "which", "who", "whom", "this", "that",
      "these", "those", "am", "is", "are", "was", "were", "be", "been", "being", "have", "has", "had",
      "having", "do", "does", "did", "doing", "a", "an", "the", "and", "but", "if", "or", "because", "as",
      "until", "while", "of", "at", "by", "for", "with", "about", "against", "between", "into", "through",
      "during", "before", "after", "above", "below", "to", "from", "up", "down", "in", "out", "on", "off",
      "over", "under", "again", "further", "then", "once", "here", "there", "when", "where", "why", "how",
      "all", "any", "both", "each", "few", "more", "most", "other", "some", "such", "no", "nor", "not",
      "only", "own", "same", "so", "than", "too", "very", "s", "t", "can", "will", "just", "don",
      "should", "now", "d", "ll", "m", "o", "re", "ve", "y", "ain", "aren", "couldn", "didn", "doesn",
      "hadn", "hasn", "haven", "isn", "ma", "mightn", "mustn", "needn", "shan", "shouldn", "wasn",
      "weren", "won", "wouldn",
      // contractions after apostrophe removal
      "dont", "doesnt", "didnt", "isnt", "arent", "wasnt", "werent", "hasnt", "havent", "hadnt", "wont",
      "wouldnt", "shouldnt", "couldnt", "cant", "mustnt", "neednt", "shant", "mightnt", "aint", "im",
      "youre", "youve", "youll", "youd", "hes", "shes", "thats", "theyre", "theyve", "theyll", "weve",
      "ive", "id", "ill", "shouldve", "itll"};
  return words;
}

struct NormalizationConfig {
  /// ECMAScript regexes removed from the raw text before tokenization.
  std::vector<std::string> placeholder_patterns{R"(\[[A-Za-z_]+\])"};
  std::unordered_set<std::string> stop_words = english_stop_words();
  bool remove_stop_words = false;
  Stemmer stemmer = Stemmer::Porter;
};

namespace normalize_detail {

/// ASCII letters, digits and the censoring '*' form tokens; every other ASCII byte separates.
inline bool is_token_byte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '*' || c >= 0x80;
}

/// Length of a UTF-8 punctuation sequence at `i` that should split tokens, 0 otherwise.
inline std::size_t unicode_separator_len(std::string_view s, std::size_t i) {
  if (i + 2 >= s.size() || static_cast<unsigned char>(s[i]) != 0xE2 || static_cast<unsigned char>(s[i + 1]) != 0x80)
    return 0;
  auto c = static_cast<unsigned char>(s[i + 2]);
  // en/em dashes, curly double quotes, ellipsis
  if (c == 0x93 || c == 0x94 || c == 0x9C || c == 0x9D || c == 0xA6) return 3;
  return 0;
}

/// Curly single quotes are dropped like ASCII apostrophes.
inline bool is_unicode_apostrophe(std::string_view s, std::size_t i) {
  return i + 2 < s.size() && static_cast<unsigned char>(s[i]) == 0xE2 &&
         static_cast<unsigned char>(s[i + 1]) == 0x80 &&
         (static_cast<unsigned char>(s[i + 2]) == 0x98 || static_cast<unsigned char>(s[i + 2]) == 0x99);
}

}  // namespace normalize_detail

/// Lowercases and splits on punctuation/whitespace. Apostrophes are removed in place
/// ("ain't" -> "aint"); tokens made only of '*' are dropped.
inline std::vector<std::string> tokenize(std::string_view raw) {
  using namespace normalize_detail;
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty() && current.find_first_not_of('*') != std::string::npos) tokens.push_back(current);
    current.clear();
  };
  for (std::size_t i = 0; i < raw.size();) {
    auto c = static_cast<unsigned char>(raw[i]);
    if (c == '\'') {
      ++i;
      continue;
    }
    if (is_unicode_apostrophe(raw, i)) {
      i += 3;
      continue;
    }
    if (std::size_t n = unicode_separator_len(raw, i)) {
      flush();
      i += n;
      continue;
    }
    if (is_token_byte(c)) {
      current += (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : static_cast<char>(c);
    } else {
      flush();
    }
    ++i;
  }
  flush();
  return tokens;
}

/// Compiled normalization pipeline. Immutable after construction, safe to share across threads.
class Normalizer {
public:
  Normalizer() : Normalizer(NormalizationConfig{}) {}

  explicit Normalizer(NormalizationConfig config) : config_(std::move(config)) {
    for (const auto& p : config_.placeholder_patterns) placeholders_.emplace_back(p, std::regex::ECMAScript);
  }

  const NormalizationConfig& config() const { return config_; }

  std::string stem(std::string_view token) const {
    return config_.stemmer == Stemmer::Porter ? porter_stem(token) : std::string(token);
  }

  bool is_stop_word(const std::string& token) const { return config_.stop_words.count(token) > 0; }

  /// Tokens with placeholders stripped, lowercased, stemmed; stop-words removed iff configured.
  std::vector<std::string> operator()(std::string_view raw) const {
    std::string cleaned(raw);
    for (const auto& re : placeholders_) cleaned = std::regex_replace(cleaned, re, " ");
    std::vector<std::string> out;
    for (auto& tok : tokenize(cleaned)) {
      if (config_.remove_stop_words && is_stop_word(tok)) continue;
      std::string stemmed = stem(tok);
      if (config_.remove_stop_words && is_stop_word(stemmed)) continue;
      out.push_back(std::move(stemmed));
    }
    return out;
  }

  /// True when every token of the (unstemmed) text is a stop-word.
  bool only_stop_words(std::string_view raw) const {
    std::string cleaned(raw);
    for (const auto& re : placeholders_) cleaned = std::regex_replace(cleaned, re, " ");
    auto toks = tokenize(cleaned);
    if (toks.empty()) return false;
    for (const auto& t : toks)
      if (!is_stop_word(t) && !is_stop_word(stem(t))) return false;
    return true;
  }

private:
  NormalizationConfig config_;
  std::vector<std::regex> placeholders_;
};

inline std::vector<std::string> normalize_text(std::string_view raw, const NormalizationConfig& config) {
  return Normalizer(config)(raw);
}

}  // namespace lexsev
