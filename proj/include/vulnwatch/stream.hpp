#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "vulnwatch/corpus.hpp"

namespace vulnwatch {

/// Transient stream failure; stream_collect retries with backoff.
struct StreamInterrupted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Source of live posts. next() blocks for the next post, returns nullopt
/// when the stream ends, and throws StreamInterrupted on a recoverable
/// failure (the caller may call next() again to resume).
class StreamSource {
 public:
  virtual ~StreamSource() = default;
  virtual std::optional<Tweet> next() = 0;
};

struct CollectOptions {
  int max_consecutive_failures = 5;
  std::chrono::milliseconds initial_backoff{200};  // doubled per retry
};

/// Append every post matching the keyword to the sink archive, one line per
/// record, flushed record-by-record. Transient interruptions are retried
/// with exponential backoff; duplicate ids left behind by a resume are
/// resolved by read_corpus on the next read. Returns the number of records
/// appended. Throws ExternalServiceError once the retry budget is spent.
std::size_t stream_collect(StreamSource& source, std::string_view keyword,
                           const std::filesystem::path& sink,
                           const CollectOptions& options = {});

/// Streams archive-format lines over HTTP from a configured endpoint.
/// Sends "Authorization: Bearer <token>" when VULNWATCH_STREAM_TOKEN is set.
/// Lines that fail to parse are skipped.
class HttpStreamSource : public StreamSource {
 public:
  explicit HttpStreamSource(std::string url);
  ~HttpStreamSource() override;
  std::optional<Tweet> next() override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace vulnwatch
