#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace lexsev {

/// Canonical class of a corpus line.
enum class ClassLabel : std::uint8_t { Hate = 0, RelativeHate = 1, NoHate = 2 };

inline constexpr std::array<ClassLabel, 3> kAllClasses{ClassLabel::Hate, ClassLabel::RelativeHate,
                                                       ClassLabel::NoHate};

inline constexpr std::size_t index_of(ClassLabel c) { return static_cast<std::size_t>(c); }

/// Machine name used in files: hate, relative_hate, no_hate.
inline std::string_view to_string(ClassLabel c) {
  switch (c) {
    case ClassLabel::Hate: return "hate";
    case ClassLabel::RelativeHate: return "relative_hate";
    case ClassLabel::NoHate: return "no_hate";
  }
  return "?";
}

/// Human name used in task titles and reports.
inline std::string_view display_name(ClassLabel c) {
  switch (c) {
    case ClassLabel::Hate: return "Hate";
    case ClassLabel::RelativeHate: return "Relative-hate";
    case ClassLabel::NoHate: return "No-hate";
  }
  return "?";
}

/// Accepts the machine names plus common spellings ("Relative-hate", "NoHate", ...).
inline std::optional<ClassLabel> parse_class_label(std::string_view s) {
  std::string folded;
  for (char ch : s) {
    if ((ch >= 'a' && ch <= 'z') || (ch >= '0' && ch <= '9')) folded += ch;
    else if (ch >= 'A' && ch <= 'Z') folded += static_cast<char>(ch - 'A' + 'a');
  }
  if (folded == "hate") return ClassLabel::Hate;
  if (folded == "relativehate" || folded == "relative") return ClassLabel::RelativeHate;
  if (folded == "nohate" || folded == "none") return ClassLabel::NoHate;
  return std::nullopt;
}

/// Fixed-size per-class storage indexed by ClassLabel.
template <class T>
struct PerClass {
  std::array<T, 3> values{};

  T& operator[](ClassLabel c) { return values[index_of(c)]; }
  const T& operator[](ClassLabel c) const { return values[index_of(c)]; }

  bool operator==(const PerClass&) const = default;
};

/// Small set of class labels (binary task sides, mining class filters).
class ClassSet {
public:
  constexpr ClassSet() = default;
  constexpr ClassSet(std::initializer_list<ClassLabel> labels) {
    for (auto c : labels) insert(c);
  }

  constexpr void insert(ClassLabel c) { bits_ |= static_cast<std::uint8_t>(1u << index_of(c)); }
  constexpr bool contains(ClassLabel c) const { return (bits_ >> index_of(c)) & 1u; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr bool disjoint(ClassSet o) const { return (bits_ & o.bits_) == 0; }
  constexpr std::uint8_t bits() const { return bits_; }

  constexpr bool operator==(const ClassSet&) const = default;

  /// "Hate + Relative-hate"
  std::string display() const {
    std::string out;
    for (auto c : kAllClasses) {
      if (!contains(c)) continue;
      if (!out.empty()) out += " + ";
      out += display_name(c);
    }
    return out;
  }

private:
  std::uint8_t bits_ = 0;
};

/// Source-dataset label -> canonical class. Must cover every label present in a corpus file.
class ClassMap {
public:
  ClassMap() = default;
  ClassMap(std::initializer_list<std::pair<const std::string, ClassLabel>> entries) : entries_(entries) {}

  void add(std::string source_label, ClassLabel c) { entries_[std::move(source_label)] = c; }

  std::optional<ClassLabel> find(const std::string& source_label) const {
    auto it = entries_.find(source_label);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  const std::map<std::string, ClassLabel>& entries() const { return entries_; }

private:
  std::map<std::string, ClassLabel> entries_;
};

}  // namespace lexsev
