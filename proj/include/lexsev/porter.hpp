#pragma once

// Porter suffix-stripping stemmer, original published rule set.
//
// Rule lists are applied first-match-wins: the first rule whose suffix matches
// decides the step, even when its condition fails. Non-letter bytes (the '*'
// used in censored terms, UTF-8 continuation bytes) count as consonants.

#include <string>
#include <string_view>
#include <vector>

namespace lexsev {

namespace porter_detail {

inline bool is_vowel_letter(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

/// One flag per byte; a 'y' is a consonant unless it follows a consonant.
inline std::vector<bool> consonant_flags(std::string_view w) {
  std::vector<bool> flags(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (is_vowel_letter(w[i])) flags[i] = false;
    else if (w[i] == 'y') flags[i] = (i == 0) ? true : !flags[i - 1];
    else flags[i] = true;
  }
  return flags;
}

inline bool is_consonant(std::string_view w, std::size_t i) { return consonant_flags(w.substr(0, i + 1))[i]; }

/// m in [C](VC){m}[V]
inline int measure(std::string_view stem) {
  auto flags = consonant_flags(stem);
  int m = 0;
  for (std::size_t i = 1; i < flags.size(); ++i)
    if (!flags[i - 1] && flags[i]) ++m;
  return m;
}

inline bool contains_vowel(std::string_view stem) {
  for (bool c : consonant_flags(stem))
    if (!c) return true;
  return false;
}

inline bool ends_double_consonant(std::string_view w) {
  return w.size() >= 2 && w[w.size() - 1] == w[w.size() - 2] && is_consonant(w, w.size() - 1);
}

/// *o: stem ends consonant-vowel-consonant, last consonant not w, x or y.
inline bool ends_cvc(std::string_view w) {
  if (w.size() < 3) return false;
  auto flags = consonant_flags(w);
  const std::size_t n = w.size();
  char last = w[n - 1];
  return flags[n - 3] && !flags[n - 2] && flags[n - 1] && last != 'w' && last != 'x' && last != 'y';
}

inline bool ends_with(std::string_view w, std::string_view suffix) {
  return w.size() >= suffix.size() && w.substr(w.size() - suffix.size()) == suffix;
}

enum class Cond { None, MGt0, MGt1, MGt1AndST, ContainsVowel };

struct Rule {
  std::string_view suffix;
  std::string_view replacement;
  Cond cond;
};

inline bool holds(Cond cond, std::string_view stem) {
  switch (cond) {
    case Cond::None: return true;
    case Cond::MGt0: return measure(stem) > 0;
    case Cond::MGt1: return measure(stem) > 1;
    case Cond::MGt1AndST: return measure(stem) > 1 && (stem.back() == 's' || stem.back() == 't');
    case Cond::ContainsVowel: return contains_vowel(stem);
  }
  return false;
}

template <std::size_t N>
std::string apply_rules(const std::string& word, const Rule (&rules)[N]) {
  for (const auto& r : rules) {
    if (ends_with(word, r.suffix)) {
      std::string_view stem = std::string_view(word).substr(0, word.size() - r.suffix.size());
      if (holds(r.cond, stem)) return std::string(stem) + std::string(r.replacement);
      return word;
    }
  }
  return word;
}

inline std::string step1a(const std::string& w) {
  static constexpr Rule rules[] = {
      {"sses", "ss", Cond::None}, {"ies", "i", Cond::None}, {"ss", "ss", Cond::None}, {"s", "", Cond::None}};
  return apply_rules(w, rules);
}

inline std::string step1b(const std::string& w) {
  if (ends_with(w, "eed")) {
    std::string stem = w.substr(0, w.size() - 3);
    return measure(stem) > 0 ? stem + "ee" : w;
  }
  std::string stem;
  bool removed = false;
  for (std::string_view suffix : {std::string_view("ed"), std::string_view("ing")}) {
    if (ends_with(w, suffix)) {
      stem = w.substr(0, w.size() - suffix.size());
      if (contains_vowel(stem)) {
        removed = true;
        break;
      }
    }
  }
  if (!removed) return w;

  if (ends_with(stem, "at") || ends_with(stem, "bl") || ends_with(stem, "iz")) return stem + "e";
  if (ends_double_consonant(stem)) {
    char last = stem.back();
    if (last != 'l' && last != 's' && last != 'z') return stem.substr(0, stem.size() - 1);
    return stem;
  }
  if (measure(stem) == 1 && ends_cvc(stem)) return stem + "e";
  return stem;
}

inline std::string step1c(const std::string& w) {
  static constexpr Rule rules[] = {{"y", "i", Cond::ContainsVowel}};
  return apply_rules(w, rules);
}

inline std::string step2(const std::string& w) {
  static constexpr Rule rules[] = {
      {"ational", "ate", Cond::MGt0}, {"tional", "tion", Cond::MGt0}, {"enci", "ence", Cond::MGt0},
      {"anci", "ance", Cond::MGt0},   {"izer", "ize", Cond::MGt0},    {"abli", "able", Cond::MGt0},
      {"alli", "al", Cond::MGt0},     {"entli", "ent", Cond::MGt0},   {"eli", "e", Cond::MGt0},
      {"ousli", "ous", Cond::MGt0},   {"ization", "ize", Cond::MGt0}, {"ation", "ate", Cond::MGt0},
      {"ator", "ate", Cond::MGt0},    {"alism", "al", Cond::MGt0},    {"iveness", "ive", Cond::MGt0},
      {"fulness", "ful", Cond::MGt0}, {"ousness", "ous", Cond::MGt0}, {"aliti", "al", Cond::MGt0},
      {"iviti", "ive", Cond::MGt0},   {"biliti", "ble", Cond::MGt0}};
  return apply_rules(w, rules);
}

inline std::string step3(const std::string& w) {
  static constexpr Rule rules[] = {{"icate", "ic", Cond::MGt0}, {"ative", "", Cond::MGt0},
                                   {"alize", "al", Cond::MGt0}, {"iciti", "ic", Cond::MGt0},
                                   {"ical", "ic", Cond::MGt0},  {"ful", "", Cond::MGt0},
                                   {"ness", "", Cond::MGt0}};
  return apply_rules(w, rules);
}

inline std::string step4(const std::string& w) {
  static constexpr Rule rules[] = {
      {"al", "", Cond::MGt1},   {"ance", "", Cond::MGt1},  {"ence", "", Cond::MGt1},
      {"er", "", Cond::MGt1},   {"ic", "", Cond::MGt1},    {"able", "", Cond::MGt1},
      {"ible", "", Cond::MGt1}, {"ant", "", Cond::MGt1},   {"ement", "", Cond::MGt1},
      {"ment", "", Cond::MGt1}, {"ent", "", Cond::MGt1},   {"ion", "", Cond::MGt1AndST},
      {"ou", "", Cond::MGt1},   {"ism", "", Cond::MGt1},   {"ate", "", Cond::MGt1},
      {"iti", "", Cond::MGt1},  {"ous", "", Cond::MGt1},   {"ive", "", Cond::MGt1},
      {"ize", "", Cond::MGt1}};
  return apply_rules(w, rules);
}

inline std::string step5a(const std::string& w) {
  if (!ends_with(w, "e")) return w;
  std::string stem = w.substr(0, w.size() - 1);
  int m = measure(stem);
  if (m > 1) return stem;
  if (m == 1 && !ends_cvc(stem)) return stem;
  return w;
}

inline std::string step5b(const std::string& w) {
  if (ends_with(w, "ll") && measure(std::string_view(w).substr(0, w.size() - 1)) > 1)
    return w.substr(0, w.size() - 1);
  return w;
}

}  // namespace porter_detail

/// A single pass of the Porter algorithm over a lowercase word.
inline std::string porter_stem_once(std::string_view word) {
  using namespace porter_detail;
  std::string w(word);
  w = step1a(w);
  w = step1b(w);
  w = step1c(w);
  w = step2(w);
  w = step3(w);
  w = step4(w);
  w = step5a(w);
  w = step5b(w);
  return w;
}

/// Porter applied until the output stops changing, so stemming is idempotent.
inline std::string porter_stem(std::string_view word) {
  std::string current(word);
  for (int pass = 0; pass < 32; ++pass) {
    std::string next = porter_stem_once(current);
    if (next == current) break;
    current = std::move(next);
  }
  return current;
}

}  // namespace lexsev
