#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "vulnwatch/corpus.hpp"

namespace vulnwatch {

struct TokenizerOptions {
  bool remove_urls = true;    // strip http(s)://... spans before splitting
  bool drop_mentions = false; // default keeps the handle text, minus the '@'
};

struct TokenizedDoc {
  std::string doc_id;
  std::vector<std::string> tokens;

  bool operator==(const TokenizedDoc&) const = default;
};

/// Lowercases and splits on any character outside [a-z0-9-]. Tokens made
/// only of hyphens are dropped, so CVE ids like "cve-2020-0688" survive
/// whole while punctuation runs vanish.
std::vector<std::string> tokenize(std::string_view text,
                                  const TokenizerOptions& options = {});

TokenizedDoc tokenize_tweet(const Tweet& tweet,
                            const TokenizerOptions& options = {});

std::vector<TokenizedDoc> tokenize_tweets(std::span<const Tweet> tweets,
                                          const TokenizerOptions& options = {});

}  // namespace vulnwatch
