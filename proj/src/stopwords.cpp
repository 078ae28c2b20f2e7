#include "vulnwatch/stopwords.hpp"

#include <algorithm>
#include <array>

namespace vulnwatch {

namespace {

// Sorted; is_stopword binary-searches it. List version: kStopwordListVersion.
constexpr std::array<std::string_view, 158> kStopwords = {
    "a",          "about",   "above",    "after",    "again",   "against",
    "ain",        "all",     "am",       "amp",      "an",      "and",
    "any",        "are",     "aren",     "as",       "at",      "be",
    "because",    "been",    "before",   "being",    "below",   "between",
    "both",       "but",     "by",       "can",      "couldn",  "d",
    "did",        "didn",    "do",       "does",     "doesn",   "doing",
    "don",        "down",    "during",   "each",     "few",     "for",
    "from",       "further", "had",      "hadn",     "has",     "hasn",
    "have",       "haven",   "having",   "he",       "her",     "here",
    "hers",       "herself", "him",      "himself",  "his",     "how",
    "http",       "https",   "i",        "if",       "in",      "into",
    "is",         "isn",     "it",       "its",      "itself",  "just",
    "ll",         "m",       "ma",       "me",       "mightn",  "more",
    "most",       "mustn",   "my",       "myself",   "needn",   "no",
    "nor",        "not",     "now",      "o",        "of",      "off",
    "on",         "once",    "only",     "or",       "other",   "our",
    "ours",       "ourselves", "out",    "over",     "own",     "re",
    "rt",         "s",       "same",     "shan",     "she",     "should",
    "shouldn",    "so",      "some",     "such",     "t",       "than",
    "that",       "the",     "their",    "theirs",   "them",    "themselves",
    "then",       "there",   "these",    "they",     "this",    "those",
    "through",    "to",      "too",      "under",    "until",   "up",
    "ve",         "very",    "via",      "was",      "wasn",    "we",
    "were",       "weren",   "what",     "when",     "where",   "which",
    "while",      "who",     "whom",     "why",      "will",    "with",
    "won",        "wouldn",  "y",        "you",      "your",    "yours",
    "yourself",   "yourselves",
};

static_assert(std::is_sorted(kStopwords.begin(), kStopwords.end()));

}  // namespace

std::span<const std::string_view> stopwords() { return kStopwords; }

bool is_stopword(std::string_view term) {
  return std::binary_search(kStopwords.begin(), kStopwords.end(), term);
}

}  // namespace vulnwatch
