#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "plainscore/vocab.hpp"

namespace plainscore {

struct TextStats {
  std::size_t n_sentences = 0;
  std::size_t n_words = 0;
  std::size_t n_syllables = 0;
  std::size_t n_chars = 0;  // alphanumeric characters only

  TextStats& operator+=(const TextStats& o) {
    n_sentences += o.n_sentences;
    n_words += o.n_words;
    n_syllables += o.n_syllables;
    n_chars += o.n_chars;
    return *this;
  }
  friend bool operator==(const TextStats&, const TextStats&) = default;
};

/// Sentence boundaries: [.?!] (plus closing quotes/brackets) followed by
/// whitespace and an uppercase letter, digit or opening bracket/quote; a blank
/// line always ends a sentence. Known abbreviations never end a sentence.
/// Returned sentences are trimmed and non-empty.
std::vector<std::string> split_sentences(std::string_view document);

/// (offset, length) of each sentence in `document`; offsets strictly increase.
std::vector<std::pair<std::size_t, std::size_t>> split_sentence_spans(std::string_view document);

/// Readability words: maximal runs of alphanumerics (any non-ASCII UTF-8 byte
/// counts as a letter). Internal hyphens join words ("follow-up"), and so do
/// '.' or ',' between digits ("6.20").
std::vector<std::string> tokenize_words(std::string_view text);

/// tokenize_words, lowercased (ASCII). Used by all evaluation metrics.
std::vector<std::string> tokenize_lower(std::string_view text);

/// Words as above plus every other non-space character as its own token,
/// case preserved. Default token counter and bag-of-words tokenizer.
std::vector<std::string> tokenize_features(std::string_view text);

std::size_t count_syllables(std::string_view word);

/// Number of alphanumeric code points in `word`.
std::size_t count_alnum_chars(std::string_view word);

TextStats compute_stats(std::string_view text);

double flesch_kincaid(const TextStats& stats);
double ari(const TextStats& stats);

struct SparseVector {
  std::vector<std::pair<TokenId, double>> entries;  // sorted by id, unique

  double sum() const;
  double dot(std::span<const double> dense) const;
};

struct BagOfWords {
  SparseVector vector;  // L1-normalised counts over in-vocabulary tokens
  std::size_t n_tokens = 0;
  std::size_t n_oov = 0;

  double oov_rate() const { return n_tokens == 0 ? 0.0 : static_cast<double>(n_oov) / static_cast<double>(n_tokens); }
};

/// Throws kAllOOV when no token maps into `vocab`, kInvalidArgument on an empty vocab.
BagOfWords bow_vector(std::string_view text, const TokenVocab& vocab);
BagOfWords bow_vector(std::span<const std::string> tokens, const TokenVocab& vocab);

/// Collapses whitespace runs to one space and trims.
std::string collapse_whitespace(std::string_view text);
std::string ascii_lower(std::string_view text);

}  // namespace plainscore
