#include "vulnwatch/evaluation.hpp"

#include <algorithm>
#include <cctype>

#include "vulnwatch/corpus.hpp"
#include "vulnwatch/csv.hpp"
#include "vulnwatch/errors.hpp"

namespace vulnwatch {

RawLabel parse_raw_label(std::string_view s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  // Trim surrounding whitespace.
  const auto first = lower.find_first_not_of(" \t\r\n");
  const auto last = lower.find_last_not_of(" \t\r\n");
  if (first == std::string::npos) throw DataError("empty raw label");
  lower = lower.substr(first, last - first + 1);
  if (lower == "threat") return RawLabel::Threat;
  if (lower == "business") return RawLabel::Business;
  if (lower == "unknown") return RawLabel::Unknown;
  if (lower == "irrelevant") return RawLabel::Irrelevant;
  throw DataError("unknown raw label: '" + std::string(s) + "'");
}

std::string_view raw_label_name(RawLabel label) {
  switch (label) {
    case RawLabel::Threat: return "threat";
    case RawLabel::Business: return "business";
    case RawLabel::Unknown: return "unknown";
    case RawLabel::Irrelevant: return "irrelevant";
  }
  return "?";
}

std::vector<LabelledTweet> prepare_benchmark(std::span<const LabelledTweet> corpus,
                                             bool case_sensitive) {
  std::vector<LabelledTweet> out;
  for (const auto& record : corpus) {
    const bool keep = case_sensitive
                          ? record.text.find("vulnerability") != std::string::npos
                          : contains_ci(record.text, "vulnerability");
    if (!keep) continue;
    LabelledTweet prepared = record;
    prepared.label = record.raw_label != RawLabel::Irrelevant;
    out.push_back(std::move(prepared));
  }
  return out;
}

namespace {

EvalMetrics from_counts(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn,
                        std::uint64_t tn, std::string subset) {
  EvalMetrics m;
  m.tp = tp;
  m.fp = fp;
  m.fn = fn;
  m.tn = tn;
  m.subset = std::move(subset);
  const auto total = m.total();
  if (total > 0)
    m.accuracy = 100.0 * static_cast<double>(tp + tn) / static_cast<double>(total);
  if (tp + fp > 0)
    m.precision = 100.0 * static_cast<double>(tp) / static_cast<double>(tp + fp);
  if (tp + fn > 0)
    m.recall = 100.0 * static_cast<double>(tp) / static_cast<double>(tp + fn);
  if (2 * tp + fp + fn > 0)
    m.f1 = 100.0 * 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
  return m;
}

}  // namespace

EvalMetrics score_predictions(const std::vector<bool>& predicted,
                              const std::vector<bool>& labels) {
  if (predicted.size() != labels.size())
    throw std::invalid_argument("predicted and label sequences differ in length");
  if (predicted.empty()) throw std::invalid_argument("nothing to score");
  std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i] && labels[i]) ++tp;
    else if (predicted[i] && !labels[i]) ++fp;
    else if (!predicted[i] && labels[i]) ++fn;
    else ++tn;
  }
  return from_counts(tp, fp, fn, tn, "all");
}

EvalMetrics subset_metrics(const std::vector<bool>& predicted,
                           const std::vector<bool>& labels,
                           const std::vector<bool>& mask, std::string subset_name) {
  if (predicted.size() != labels.size() || predicted.size() != mask.size())
    throw std::invalid_argument("sequence lengths differ");
  std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
  std::size_t selected = 0;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (!mask[i]) continue;
    ++selected;
    if (predicted[i] && labels[i]) ++tp;
    else if (predicted[i] && !labels[i]) ++fp;
    else if (!predicted[i] && labels[i]) ++fn;
    else ++tn;
  }
  if (selected == 0) throw std::invalid_argument("mask selects no items");
  return from_counts(tp, fp, fn, tn, std::move(subset_name));
}

std::vector<LabelledTweet> load_benchmark(const std::filesystem::path& path,
                                          const BenchmarkFormat& format) {
  const auto rows = read_csv(path, format.delimiter);
  if (rows.empty()) return {};

  int text_idx = format.text_index;
  int label_idx = format.label_index;
  std::size_t start = 0;
  if (format.has_header) {
    const auto& header = rows.front();
    text_idx = label_idx = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == format.text_column) text_idx = static_cast<int>(i);
      if (header[i] == format.label_column) label_idx = static_cast<int>(i);
    }
    if (text_idx < 0)
      throw DataError("benchmark header lacks column '" + format.text_column + "'");
    if (label_idx < 0)
      throw DataError("benchmark header lacks column '" + format.label_column + "'");
    start = 1;
  }

  std::vector<LabelledTweet> out;
  for (std::size_t r = start; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const auto width = static_cast<int>(row.size());
    if (text_idx >= width || label_idx >= width)
      throw DataError("benchmark row " + std::to_string(r + 1) + " has only " +
                      std::to_string(width) + " fields");
    LabelledTweet record;
    record.text = row[text_idx];
    record.raw_label = parse_raw_label(row[label_idx]);
    record.label = record.raw_label != RawLabel::Irrelevant;
    out.push_back(std::move(record));
  }
  return out;
}

}  // namespace vulnwatch
