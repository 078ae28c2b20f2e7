#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace vulnwatch {

enum class RawLabel { Threat, Business, Unknown, Irrelevant };

RawLabel parse_raw_label(std::string_view s);  // throws DataError on other values
std::string_view raw_label_name(RawLabel label);

struct LabelledTweet {
  std::string text;
  RawLabel raw_label = RawLabel::Irrelevant;
  bool label = false;  // cyber-relevant == (raw_label != Irrelevant)

  bool operator==(const LabelledTweet&) const = default;
};

/// Confusion counts with percent-scaled derived metrics. Ratios with a zero
/// denominator are reported absent, never as 0.
struct EvalMetrics {
  std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
  std::optional<double> accuracy;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
  std::string subset = "all";

  std::uint64_t total() const { return tp + fp + fn + tn; }
};

/// Keep records whose text contains "vulnerability" (case-insensitive by
/// default), collapsing threat/business/unknown to the positive class.
/// Order preserved; idempotent.
std::vector<LabelledTweet> prepare_benchmark(std::span<const LabelledTweet> corpus,
                                             bool case_sensitive = false);

/// Confusion counts and derived metrics; sequences must be equal length >= 1.
EvalMetrics score_predictions(const std::vector<bool>& predicted,
                              const std::vector<bool>& labels);

/// Metrics over the masked subset only (mask must select at least one item).
EvalMetrics subset_metrics(const std::vector<bool>& predicted,
                           const std::vector<bool>& labels,
                           const std::vector<bool>& mask, std::string subset_name);

struct BenchmarkFormat {
  char delimiter = ',';
  std::string text_column = "text";
  std::string label_column = "label";
  bool has_header = true;
  int text_index = 0;   // used when has_header is false
  int label_index = 1;
};

/// Load raw labelled records from a delimiter-separated file.
std::vector<LabelledTweet> load_benchmark(const std::filesystem::path& path,
                                          const BenchmarkFormat& format = {});

}  // namespace vulnwatch
