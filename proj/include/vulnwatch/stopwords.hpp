#pragma once

#include <span>
#include <string_view>

namespace vulnwatch {

/// Version tag for the shipped English stopword list; bump on any edit so
/// downstream keyword output is traceable to a list revision.
inline constexpr std::string_view kStopwordListVersion = "en-1";

/// Lowercase English stopwords in the tokenizer's alphabet (apostrophe-free
/// contraction fragments included), plus tweet boilerplate (rt, amp, via).
std::span<const std::string_view> stopwords();

bool is_stopword(std::string_view term);

}  // namespace vulnwatch
