#include "vulnwatch/nvd.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "httplib.h"
#include "json.hpp"
#include "vulnwatch/cve.hpp"
#include "vulnwatch/errors.hpp"
#include "vulnwatch/time.hpp"

namespace vulnwatch {

namespace {

std::string format_score(const CveRecord& record) {
  if (!record.cvss3) return "NA";
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%.1f", *record.cvss3);
  return buf;
}

std::pair<std::string, std::string> split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos)
    throw ConfigError("NVD base URL must be an http(s) URL: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

HttpNvdClient::HttpNvdClient(std::string base_url) {
  auto [host, path] = split_url(base_url);
  host_ = std::move(host);
  path_ = std::move(path);
}

CveRecord HttpNvdClient::fetch(const std::string& cve_id) {
  // httplib throws std::invalid_argument for schemes this build cannot speak
  // (e.g. https without TLS); keep that inside the service-error taxonomy.
  auto client = [&] {
    try {
      return httplib::Client(host_);
    } catch (const std::exception& e) {
      throw ExternalServiceError(std::string("NVD client: ") + e.what());
    }
  }();
  client.set_read_timeout(30, 0);
  httplib::Headers headers;
  if (const char* key = std::getenv("VULNWATCH_NVD_KEY"))
    headers.emplace("apiKey", key);

  const std::string target = path_ + (path_.find('?') == std::string::npos ? "?" : "&") +
                             "cveId=" + cve_id;
  auto res = client.Get(target, headers);
  if (!res)
    throw ExternalServiceError("NVD request failed: " + host_);
  if (res->status != 200)
    throw ExternalServiceError("NVD returned status " + std::to_string(res->status));

  const auto body = nlohmann::json::parse(res->body, nullptr, false);
  if (body.is_discarded())
    throw ExternalServiceError("NVD returned unparseable JSON");

  CveRecord record;
  record.cve_id = cve_id;
  const auto vulns = body.value("vulnerabilities", nlohmann::json::array());
  if (vulns.empty()) {
    record.status = CvssStatus::Unknown;
    return record;
  }
  record.status = CvssStatus::Unscored;
  const auto& cve = vulns.at(0).value("cve", nlohmann::json::object());
  const auto metrics = cve.value("metrics", nlohmann::json::object());
  // Prefer v3.1, fall back to any cvssMetricV3x block.
  for (const char* key : {"cvssMetricV31", "cvssMetricV30"}) {
    if (!metrics.contains(key)) continue;
    const auto& arr = metrics.at(key);
    if (!arr.is_array() || arr.empty()) continue;
    const auto& data = arr.at(0).value("cvssData", nlohmann::json::object());
    if (data.contains("baseScore") && data.at("baseScore").is_number()) {
      record.cvss3 = data.at("baseScore").get<double>();
      record.status = CvssStatus::Scored;
      break;
    }
  }
  return record;
}

CvssCache::CvssCache(std::filesystem::path path) : path_(std::move(path)) {
  std::ifstream in(path_);
  if (!in) return;  // a missing cache file is an empty cache
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto tab1 = line.find('\t');
    const auto tab2 = tab1 == std::string::npos ? std::string::npos
                                                : line.find('\t', tab1 + 1);
    if (tab1 == std::string::npos || tab2 == std::string::npos)
      throw DataError("bad cache line in " + path_.string() + ": " + line);
    CveRecord record;
    record.cve_id = line.substr(0, tab1);
    const std::string score = line.substr(tab1 + 1, tab2 - tab1 - 1);
    if (score == "NA") {
      record.status = CvssStatus::Unscored;
    } else {
      try {
        record.cvss3 = std::stod(score);
      } catch (const std::exception&) {
        throw DataError("bad score in cache line: " + line);
      }
      record.status = CvssStatus::Scored;
    }
    const auto fetched = parse_rfc3339(line.substr(tab2 + 1));
    if (!fetched) throw DataError("bad fetched_at in cache line: " + line);
    const std::string id = record.cve_id;
    entries_[id] = {std::move(record), *fetched};
  }
}

std::optional<std::pair<CveRecord, std::int64_t>> CvssCache::lookup(
    const std::string& cve_id) const {
  auto it = entries_.find(cve_id);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void CvssCache::store(const CveRecord& record, std::int64_t fetched_at) {
  std::ofstream out(path_, std::ios::app);
  if (!out) throw DataError("cannot append to cache: " + path_.string());
  out << record.cve_id << '\t' << format_score(record) << '\t'
      << format_rfc3339_utc(fetched_at) << '\n';
  out.flush();
  if (!out) throw DataError("cache write failed: " + path_.string());
  entries_[record.cve_id] = {record, fetched_at};
}

CvssSource::CvssSource(std::shared_ptr<NvdClient> remote,
                       std::shared_ptr<CvssCache> cache, std::int64_t ttl_seconds)
    : remote_(std::move(remote)), cache_(std::move(cache)), ttl_(ttl_seconds) {
  if (!remote_ && !cache_)
    throw ConfigError("CVSS source needs a remote client or a cache");
}

std::int64_t CvssSource::now() const {
  if (now_override_) return *now_override_;
  return std::chrono::duration_cast<std::chrono::seconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

CveRecord CvssSource::fetch(const std::string& cve_id) {
  if (!is_canonical_cve(cve_id))
    throw std::invalid_argument("not a canonical CVE id: " + cve_id);

  const auto cached = cache_ ? cache_->lookup(cve_id) : std::nullopt;
  if (cached && (now() - cached->second) <= ttl_) return cached->first;
  if (cached && !remote_) return cached->first;  // stale beats nothing

  if (!remote_) {
    throw ExternalServiceError("no cache entry for " + cve_id +
                               " and no remote configured");
  }
  try {
    CveRecord record = remote_->fetch(cve_id);
    // Unknown ids are deliberately not cached; the schema cannot distinguish
    // them from known-but-unscored and they may be published later.
    if (cache_ && record.status != CvssStatus::Unknown) cache_->store(record, now());
    return record;
  } catch (const ExternalServiceError&) {
    if (cached) return cached->first;
    throw;
  }
}

}  // namespace vulnwatch
