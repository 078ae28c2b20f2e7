#include "vulnwatch/tokenize.hpp"

#include <algorithm>
#include <cctype>

namespace vulnwatch {

namespace {

bool is_token_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-';
}

bool starts_with_ci(std::string_view s, std::size_t pos, std::string_view prefix) {
  if (pos + prefix.size() > s.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i)
    if (std::tolower(static_cast<unsigned char>(s[pos + i])) != prefix[i])
      return false;
  return true;
}

// Blank out spans that should not produce tokens: URLs (scheme-prefixed,
// up to the next whitespace) and, optionally, @mentions.
std::string scrub(std::string_view text, const TokenizerOptions& options) {
  std::string out(text);
  std::size_t i = 0;
  while (i < out.size()) {
    const bool url = options.remove_urls && (starts_with_ci(out, i, "http://") ||
                                             starts_with_ci(out, i, "https://"));
    const bool mention = options.drop_mentions && out[i] == '@';
    if (url || mention) {
      while (i < out.size() && !std::isspace(static_cast<unsigned char>(out[i])))
        out[i++] = ' ';
    } else {
      ++i;
    }
  }
  return out;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text,
                                  const TokenizerOptions& options) {
  const std::string scrubbed = scrub(text, options);
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty() &&
        !std::all_of(current.begin(), current.end(),
                     [](char c) { return c == '-'; }))
      tokens.push_back(current);
    current.clear();
  };
  for (char raw : scrubbed) {
    const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(raw)));
    if (is_token_char(c))
      current.push_back(c);
    else
      flush();
  }
  flush();
  return tokens;
}

TokenizedDoc tokenize_tweet(const Tweet& tweet, const TokenizerOptions& options) {
  return TokenizedDoc{tweet.id, tokenize(tweet.text, options)};
}

std::vector<TokenizedDoc> tokenize_tweets(std::span<const Tweet> tweets,
                                          const TokenizerOptions& options) {
  std::vector<TokenizedDoc> docs;
  docs.reserve(tweets.size());
  for (const auto& t : tweets) docs.push_back(tokenize_tweet(t, options));
  return docs;
}

}  // namespace vulnwatch
