#pragma once

#include <memory>
#include <string>
#include <vector>

namespace vulnwatch {

/// Entailment probability source: how likely the hypothesis is entailed by
/// the premise, in [0, 1]. Implementations must be deterministic for a
/// fixed backing model. Out-of-range outputs are rejected at the boundary
/// by the callers.
class EntailmentScorer {
 public:
  virtual ~EntailmentScorer() = default;
  virtual double score(const std::string& premise, const std::string& hypothesis) = 0;

  /// One premise batch against a shared hypothesis; default loops score().
  virtual std::vector<double> score_batch(const std::vector<std::string>& premises,
                                          const std::string& hypothesis);
};

/// Deterministic test double: 0.9 when the lowercased premise contains any
/// of {vulnerability, cve, exploit, patch, malware, security}, else 0.1.
class MockScorer : public EntailmentScorer {
 public:
  double score(const std::string& premise, const std::string& hypothesis) override;
};

std::unique_ptr<EntailmentScorer> mock_scorer();

/// Remote scorer speaking the wire protocol:
///   POST /score        {"premise": s, "hypothesis": h} -> {"entailment": p}
///   POST /score_batch  {"premises": [s...], "hypothesis": h} -> {"entailments": [p...]}
/// Any non-200 status is a retriable failure (ExternalServiceError).
/// VULNWATCH_SCORER_TOKEN, when set, is sent as a bearer token.
class HttpEntailmentScorer : public EntailmentScorer {
 public:
  explicit HttpEntailmentScorer(std::string base_url);
  double score(const std::string& premise, const std::string& hypothesis) override;
  std::vector<double> score_batch(const std::vector<std::string>& premises,
                                  const std::string& hypothesis) override;

 private:
  std::string host_;
  std::string base_path_;
};

}  // namespace vulnwatch
