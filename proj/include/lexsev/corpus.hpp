#pragma once

#include <algorithm>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "lexsev/errors.hpp"
#include "lexsev/labels.hpp"
#include "lexsev/normalize.hpp"
#include "lexsev/term_list.hpp"
#include "lexsev/text.hpp"

namespace lexsev {

struct CorpusLine {
  std::size_t id = 0;
  std::string raw;
  std::vector<std::string> tokens;
  ClassLabel label = ClassLabel::NoHate;
};

/// Labeled lines in file order. Ids are 1-based record numbers and never reused.
class LabeledCorpus {
public:
  LabeledCorpus() = default;
  LabeledCorpus(std::string name, std::vector<CorpusLine> lines) : name_(std::move(name)), lines_(std::move(lines)) {
    for (const auto& l : lines_) ++class_sizes_[l.label];
  }

  /// Builds a corpus from in-memory (text, label) pairs; ids are assigned 1..n.
  static LabeledCorpus from_texts(std::string name, const std::vector<std::pair<std::string, ClassLabel>>& rows,
                                  const Normalizer& normalizer) {
    std::vector<CorpusLine> lines;
    lines.reserve(rows.size());
    std::size_t id = 0;
    for (const auto& [raw, label] : rows) lines.push_back(CorpusLine{++id, raw, normalizer(raw), label});
    return LabeledCorpus(std::move(name), std::move(lines));
  }

  const std::string& name() const { return name_; }
  const std::vector<CorpusLine>& lines() const { return lines_; }
  std::size_t size() const { return lines_.size(); }
  std::size_t class_size(ClassLabel c) const { return class_sizes_[c]; }
  const PerClass<std::size_t>& class_sizes() const { return class_sizes_; }

  std::size_t side_size(ClassSet side) const {
    std::size_t n = 0;
    for (auto c : kAllClasses)
      if (side.contains(c)) n += class_sizes_[c];
    return n;
  }

private:
  std::string name_;
  std::vector<CorpusLine> lines_;
  PerClass<std::size_t> class_sizes_{};
};

enum class CorpusFormat { Delimited, LinesWithLabels };

/// How to read a corpus file.
///
/// Delimited: RFC 4180 style records (quoted fields may contain delimiters, doubled
/// quotes and newlines). With `has_header` the columns are addressed by name, otherwise
/// by zero-based index written as a string ("0", "1", ...).
///
/// LinesWithLabels: one document per line in the main file, one label per line in
/// `labels_path`.
struct CorpusSchema {
  CorpusFormat format = CorpusFormat::Delimited;
  char delimiter = ',';
  char quote = '"';
  bool has_header = true;
  std::string text_column = "text";
  std::string label_column = "label";
  std::filesystem::path labels_path;
};

namespace csv {

/// Parses delimited text into records. Throws on an unterminated quoted field.
inline std::vector<std::vector<std::string>> parse(std::string_view data, char delimiter = ',', char quote = '"') {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    // a bare empty line is not a record
    if (!(record.size() == 1 && record[0].empty())) records.push_back(std::move(record));
    record.clear();
  };
  for (std::size_t i = 0; i < data.size(); ++i) {
    char c = data[i];
    if (in_quotes) {
      if (c == quote) {
        if (i + 1 < data.size() && data[i + 1] == quote) {
          field += quote;
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == quote && !field_started) {
      in_quotes = true;
      field_started = true;
    } else if (c == delimiter) {
      end_field();
    } else if (c == '\n') {
      end_record();
    } else if (c == '\r') {
      if (i + 1 < data.size() && data[i + 1] == '\n') continue;
      end_record();
    } else {
      field += c;
      field_started = true;
    }
  }
  if (in_quotes) throw IngestionError("unterminated quoted field");
  if (field_started || !field.empty() || !record.empty()) end_record();
  return records;
}

}  // namespace csv

/// Reads, labels and normalizes a corpus. Every source label must be in `class_map`;
/// all unmapped labels are collected and reported in one error.
inline LabeledCorpus load_corpus(const std::filesystem::path& path, std::string name, const CorpusSchema& schema,
                                 const ClassMap& class_map, const Normalizer& normalizer,
                                 IngestionReport* report = nullptr) {
  IngestionReport local;
  IngestionReport& rep = report ? *report : local;
  rep.source = path.string();
  rep.kind = "corpus";

  std::vector<std::pair<std::string, std::string>> rows;  // (text, source label)
  std::string data = read_utf8_file(path);
  std::string_view body = text::strip_bom(data);

  if (schema.format == CorpusFormat::Delimited) {
    std::vector<std::vector<std::string>> records;
    try {
      records = csv::parse(body, schema.delimiter, schema.quote);
    } catch (const IngestionError& e) {
      throw IngestionError(path.string() + ": " + e.what());
    }
    std::size_t text_col = 0, label_col = 0;
    std::size_t first = 0;
    if (schema.has_header) {
      if (records.empty()) throw IngestionError(path.string() + ": zero lines");
      const auto& header = records[0];
      auto locate = [&](const std::string& col) {
        auto it = std::find_if(header.begin(), header.end(),
                               [&](const std::string& h) { return text::trim(h) == col; });
        if (it == header.end()) throw IngestionError(path.string() + ": missing column '" + col + "'");
        return static_cast<std::size_t>(it - header.begin());
      };
      text_col = locate(schema.text_column);
      label_col = locate(schema.label_column);
      first = 1;
    } else {
      auto index = [&](const std::string& col) {
        try {
          return static_cast<std::size_t>(std::stoul(col));
        } catch (...) {
          throw IngestionError(path.string() + ": missing column '" + col + "' (no header; use a column index)");
        }
      };
      text_col = index(schema.text_column);
      label_col = index(schema.label_column);
    }
    for (std::size_t r = first; r < records.size(); ++r) {
      const auto& rec = records[r];
      if (text_col >= rec.size() || label_col >= rec.size())
        throw IngestionError(path.string() + ": record " + std::to_string(r + 1) + " has " +
                             std::to_string(rec.size()) + " fields; missing column");
      rows.emplace_back(rec[text_col], std::string(text::trim(rec[label_col])));
    }
  } else {
    std::string label_data = read_utf8_file(schema.labels_path);
    auto split_lines = [](std::string_view s) {
      std::vector<std::string> out;
      std::string cur;
      for (char c : s) {
        if (c == '\n') {
          if (!cur.empty() && cur.back() == '\r') cur.pop_back();
          out.push_back(std::move(cur));
          cur.clear();
        } else {
          cur += c;
        }
      }
      if (!cur.empty()) out.push_back(std::move(cur));
      return out;
    };
    auto docs = split_lines(body);
    auto labels = split_lines(text::strip_bom(label_data));
    while (!labels.empty() && text::trim(labels.back()).empty()) labels.pop_back();
    if (docs.size() != labels.size())
      throw IngestionError(path.string() + ": " + std::to_string(docs.size()) + " documents but " +
                           std::to_string(labels.size()) + " labels in " + schema.labels_path.string());
    for (std::size_t i = 0; i < docs.size(); ++i) rows.emplace_back(docs[i], std::string(text::trim(labels[i])));
  }

  rep.records_read = rows.size();
  if (rows.empty()) throw IngestionError(path.string() + ": zero lines");

  std::set<std::string> unmapped;
  std::vector<CorpusLine> lines;
  lines.reserve(rows.size());
  std::size_t id = 0;
  for (auto& [raw, source_label] : rows) {
    ++id;
    auto label = class_map.find(source_label);
    if (!label) {
      unmapped.insert(source_label);
      continue;
    }
    auto tokens = normalizer(raw);
    lines.push_back(CorpusLine{id, std::move(raw), std::move(tokens), *label});
  }
  if (!unmapped.empty()) {
    rep.unmapped_labels.assign(unmapped.begin(), unmapped.end());
    std::string names;
    for (const auto& u : unmapped) names += (names.empty() ? "'" : ", '") + u + "'";
    throw IngestionError(path.string() + ": unmapped label " + names);
  }
  LabeledCorpus corpus(std::move(name), std::move(lines));
  rep.records_kept = corpus.size();
  rep.lines_per_class = corpus.class_sizes();
  return corpus;
}

}  // namespace lexsev
