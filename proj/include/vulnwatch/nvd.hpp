#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>

namespace vulnwatch {

enum class CvssStatus {
  Scored,    // CVE published with a CVSS v3 base score
  Unscored,  // CVE known to the source but no v3 score (the "N/A" case)
  Unknown,   // source has no record of the id
};

struct CveRecord {
  std::string cve_id;
  std::optional<double> cvss3;  // base score in [0, 10] when present
  CvssStatus status = CvssStatus::Unknown;

  bool operator==(const CveRecord&) const = default;
};

/// Remote score source. fetch throws ExternalServiceError when unreachable.
class NvdClient {
 public:
  virtual ~NvdClient() = default;
  virtual CveRecord fetch(const std::string& cve_id) = 0;
};

/// NVD REST client: GET <base_url>?cveId=<id>, optional API key from
/// VULNWATCH_NVD_KEY sent as the apiKey header. Parses the first
/// cvssMetricV3x base score.
class HttpNvdClient : public NvdClient {
 public:
  explicit HttpNvdClient(std::string base_url);
  CveRecord fetch(const std::string& cve_id) override;

 private:
  std::string host_;
  std::string path_;
};

/// TAB-separated score cache: "cve_id<TAB>score-or-NA<TAB>fetched_at".
/// Writes append; the latest line for an id wins on load.
class CvssCache {
 public:
  explicit CvssCache(std::filesystem::path path);

  std::optional<std::pair<CveRecord, std::int64_t>> lookup(const std::string& cve_id) const;
  void store(const CveRecord& record, std::int64_t fetched_at);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::map<std::string, std::pair<CveRecord, std::int64_t>> entries_;
};

/// CVSS lookups through an optional cache backed by an optional remote.
/// A cache entry younger than the TTL short-circuits the remote call;
/// remote results are written through; on remote failure any cache entry
/// (stale included) is served before giving up.
class CvssSource {
 public:
  CvssSource(std::shared_ptr<NvdClient> remote, std::shared_ptr<CvssCache> cache,
             std::int64_t ttl_seconds = 7 * 24 * 3600);

  /// cve_id must be canonical (std::invalid_argument otherwise). Throws
  /// ExternalServiceError when neither cache nor remote can answer.
  CveRecord fetch(const std::string& cve_id);

  /// Injectable clock for tests; defaults to wall time.
  void set_now(std::int64_t now) { now_override_ = now; }

 private:
  std::int64_t now() const;
  std::shared_ptr<NvdClient> remote_;
  std::shared_ptr<CvssCache> cache_;
  std::int64_t ttl_;
  std::optional<std::int64_t> now_override_;
};

}  // namespace vulnwatch
