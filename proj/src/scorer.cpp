#include "vulnwatch/scorer.hpp"

#include <array>
#include <cstdlib>

#include "httplib.h"
#include "json.hpp"
#include "vulnwatch/corpus.hpp"
#include "vulnwatch/errors.hpp"

namespace vulnwatch {

std::vector<double> EntailmentScorer::score_batch(
    const std::vector<std::string>& premises, const std::string& hypothesis) {
  std::vector<double> out;
  out.reserve(premises.size());
  for (const auto& p : premises) out.push_back(score(p, hypothesis));
  return out;
}

double MockScorer::score(const std::string& premise, const std::string&) {
  static constexpr std::array<std::string_view, 6> kKeywords = {
      "vulnerability", "cve", "exploit", "patch", "malware", "security"};
  for (auto kw : kKeywords)
    if (contains_ci(premise, kw)) return 0.9;
  return 0.1;
}

std::unique_ptr<EntailmentScorer> mock_scorer() {
  return std::make_unique<MockScorer>();
}

namespace {

std::pair<std::string, std::string> split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos ||
      (url.compare(0, scheme_end, "http") != 0 &&
       url.compare(0, scheme_end, "https") != 0))
    throw ConfigError("scorer_url must be an http(s) URL: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, ""};
  std::string path = url.substr(path_start);
  while (!path.empty() && path.back() == '/') path.pop_back();
  return {url.substr(0, path_start), path};
}

httplib::Headers auth_headers() {
  httplib::Headers headers;
  if (const char* token = std::getenv("VULNWATCH_SCORER_TOKEN"))
    headers.emplace("Authorization", std::string("Bearer ") + token);
  return headers;
}

nlohmann::json post_json(const std::string& host, const std::string& path,
                         const nlohmann::json& body) {
  // httplib throws std::invalid_argument for schemes this build cannot speak
  // (e.g. https without TLS); keep that inside the service-error taxonomy.
  auto client = [&] {
    try {
      return httplib::Client(host);
    } catch (const std::exception& e) {
      throw ExternalServiceError(std::string("scorer client: ") + e.what());
    }
  }();
  client.set_read_timeout(120, 0);
  auto res = client.Post(path, auth_headers(), body.dump(), "application/json");
  if (!res) throw ExternalServiceError("scorer unreachable: " + host);
  if (res->status != 200)
    throw ExternalServiceError("scorer returned status " + std::to_string(res->status));
  auto parsed = nlohmann::json::parse(res->body, nullptr, false);
  if (parsed.is_discarded())
    throw ExternalServiceError("scorer returned unparseable JSON");
  return parsed;
}

double check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw ExternalServiceError("scorer produced a probability outside [0,1]");
  return p;
}

}  // namespace

HttpEntailmentScorer::HttpEntailmentScorer(std::string base_url) {
  auto [host, path] = split_url(base_url);
  host_ = std::move(host);
  base_path_ = std::move(path);
}

double HttpEntailmentScorer::score(const std::string& premise,
                                   const std::string& hypothesis) {
  nlohmann::json body;
  body["premise"] = premise;
  body["hypothesis"] = hypothesis;
  const auto res = post_json(host_, base_path_ + "/score", body);
  if (!res.contains("entailment") || !res["entailment"].is_number())
    throw ExternalServiceError("scorer response lacks \"entailment\"");
  return check_probability(res["entailment"].get<double>());
}

std::vector<double> HttpEntailmentScorer::score_batch(
    const std::vector<std::string>& premises, const std::string& hypothesis) {
  nlohmann::json body;
  body["premises"] = premises;
  body["hypothesis"] = hypothesis;
  const auto res = post_json(host_, base_path_ + "/score_batch", body);
  if (!res.contains("entailments") || !res["entailments"].is_array())
    throw ExternalServiceError("scorer response lacks \"entailments\"");
  const auto& arr = res["entailments"];
  if (arr.size() != premises.size())
    throw ExternalServiceError("scorer batch length mismatch");
  std::vector<double> out;
  out.reserve(arr.size());
  for (const auto& v : arr) {
    if (!v.is_number())
      throw ExternalServiceError("scorer batch entry is not a number");
    out.push_back(check_probability(v.get<double>()));
  }
  return out;
}

}  // namespace vulnwatch
