#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "plainscore/execution.hpp"

namespace plainscore {

using Tokens = std::vector<std::string>;

// All metrics work on lowercased word tokens (tokenize_lower). The text
// overloads tokenize and throw kEmptyText when a side has no tokens.

enum class RougeVariant { kRouge1, kRouge2, kRougeL };

/// F1 (beta = 1) of clipped n-gram overlap, or of LCS length for ROUGE-L on the
/// whole text. When neither side has an n-gram of the order the score is 1 for
/// identical token sequences and 0 otherwise.
double rouge_f1(std::string_view candidate, std::string_view reference, RougeVariant variant);
double rouge_f1(const Tokens& candidate, const Tokens& reference, RougeVariant variant);

struct BleuResult {
  double score = 0.0;
  double brevity_penalty = 1.0;
  std::array<double, 4> precisions{};  // per order; 0 where skipped
  std::size_t orders_used = 0;
  bool smoothed = false;  // some order had zero matches
};

/// Geometric mean of clipped precisions over orders 1..max_n that have at least
/// one candidate n-gram; an order with zero matches scores (m+1)/(c+1).
/// Brevity penalty exp(1 - r/c) when the candidate is shorter than the reference.
BleuResult bleu(std::string_view candidate, std::string_view reference, std::size_t max_n = 4);
BleuResult bleu(const Tokens& candidate, const Tokens& reference, std::size_t max_n = 4);

/// Mean over n = 1..4 of (F1_keep + P_del + F1_add) / 3. An empty operation
/// set scores 1 in both precision and recall.
double sari(std::string_view source, std::string_view candidate, std::span<const std::string> references);
double sari(const Tokens& source, const Tokens& candidate, std::span<const Tokens> references);

/// |distinct candidate n-grams also in source| / |distinct candidate n-grams|.
/// Throws kTooShort when the candidate has fewer than n tokens.
double ngram_overlap(std::string_view candidate, std::string_view source, std::size_t n);
double ngram_overlap(const Tokens& candidate, const Tokens& source, std::size_t n);

struct LengthStats {
  std::size_t n_tokens = 0;
  std::size_t n_sentences = 0;
};

LengthStats length_stats(std::string_view text);

struct EvalRecord {
  std::string doc_id;
  std::string source;     // technical abstract
  std::string reference;  // human plain-language summary
  std::string candidate;  // generated summary
};

struct Readability {
  std::optional<double> fk;
  std::optional<double> ari;
};

struct DocumentMetrics {
  std::string doc_id;
  double rouge1 = 0.0, rouge2 = 0.0, rougeL = 0.0;
  double bleu = 0.0;
  bool bleu_smoothed = false;
  double sari = 0.0;
  std::array<std::optional<double>, 4> overlap;            // candidate vs source, n = 1..4
  std::array<std::optional<double>, 4> reference_overlap;  // reference vs source
  LengthStats source_length, reference_length, candidate_length;
  Readability source_readability, reference_readability, candidate_readability;
};

/// Throws kEmptyText if any of the three texts is empty.
DocumentMetrics evaluate_record(const EvalRecord& record);

std::vector<DocumentMetrics> evaluate_records(std::span<const EvalRecord> records,
                                              Execution exec = Execution::kParallel);

}  // namespace plainscore
