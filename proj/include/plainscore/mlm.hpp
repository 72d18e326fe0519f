#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "plainscore/corpus.hpp"
#include "plainscore/execution.hpp"
#include "plainscore/vocab.hpp"

namespace plainscore {

struct ScorerInfo {
  std::string model_name;
  std::size_t vocab_size = 0;
  std::size_t max_sequence_length = 0;
  TokenId mask_token_id = 0;
};

/// A masked language model queried for the probability of the original token
/// at masked positions. Implementations must be deterministic.
class MaskedLMScorer {
 public:
  virtual ~MaskedLMScorer() = default;

  virtual const ScorerInfo& info() const = 0;

  /// Maximum number of content ids accepted by fill(); boundary specials excluded.
  virtual std::size_t max_tokens() const { return info().max_sequence_length; }

  /// Subword ids without boundary specials.
  virtual std::vector<TokenId> tokenize(std::string_view sentence) const = 0;

  /// Masks every position in `masked_positions` at once and returns, in the
  /// same order, the probability assigned to the original id at each.
  virtual std::vector<double> fill(std::span<const TokenId> ids, std::span<const std::size_t> masked_positions) const = 0;

  /// False when concurrent calls are unsafe; the driver then serialises them.
  virtual bool thread_safe() const { return true; }
};

/// Every original token gets probability 1/V.
class UniformScorer final : public MaskedLMScorer {
 public:
  explicit UniformScorer(std::size_t vocab_size, std::size_t max_tokens = 510);

  const ScorerInfo& info() const override { return info_; }
  std::vector<TokenId> tokenize(std::string_view sentence) const override;
  std::vector<double> fill(std::span<const TokenId> ids, std::span<const std::size_t> masked_positions) const override;

 private:
  ScorerInfo info_;
};

/// Returns a fixed probability for every masked slot of a registered sentence
/// and `fallback` elsewhere. Words are ids in a vocabulary built from the
/// registered sentences; unseen words share one id.
class ConstantPerSentenceScorer final : public MaskedLMScorer {
 public:
  ConstantPerSentenceScorer(const std::vector<std::pair<std::string, double>>& sentences, double fallback = 0.0);

  const ScorerInfo& info() const override { return info_; }
  std::vector<TokenId> tokenize(std::string_view sentence) const override;
  std::vector<double> fill(std::span<const TokenId> ids, std::span<const std::size_t> masked_positions) const override;

 private:
  ScorerInfo info_;
  std::map<std::string, TokenId, std::less<>> word_ids_;
  std::map<std::vector<TokenId>, double> by_sentence_;
  double fallback_;
};

/// Context-free add-one unigram model over feature tokens of a training
/// text; offline stand-in for a real masked LM.
class UnigramScorer final : public MaskedLMScorer {
 public:
  explicit UnigramScorer(std::span<const std::string> training_texts, std::size_t max_tokens = 510);

  const ScorerInfo& info() const override { return info_; }
  std::vector<TokenId> tokenize(std::string_view sentence) const override;
  std::vector<double> fill(std::span<const TokenId> ids, std::span<const std::size_t> masked_positions) const override;

 private:
  ScorerInfo info_;
  TokenVocab vocab_;
  std::vector<double> probs_;  // last entry is the unknown-token probability
};

/// Wraps a scorer that is not thread-safe; calls are queued on a mutex.
class SerializedScorer final : public MaskedLMScorer {
 public:
  explicit SerializedScorer(const MaskedLMScorer& inner) : inner_(&inner) {}

  const ScorerInfo& info() const override { return inner_->info(); }
  std::size_t max_tokens() const override { return inner_->max_tokens(); }
  std::vector<TokenId> tokenize(std::string_view sentence) const override;
  std::vector<double> fill(std::span<const TokenId> ids, std::span<const std::size_t> masked_positions) const override;

 private:
  const MaskedLMScorer* inner_;
  mutable std::mutex mu_;
};

struct MaskingConfig {
  std::size_t rounds = 10;
  double mask_frac = 0.15;

  void validate() const;
};

/// max(1, round(mask_frac * n)) for n maskable tokens.
std::size_t masks_per_round(std::size_t n_tokens, double mask_frac);

struct TechnicalityScore {
  std::string doc_id;
  double mean_prob = 0.0;
  std::size_t n_probs = 0;
  std::vector<std::size_t> per_sentence_counts;  // masked slots per sentence (or chunk), all rounds

  friend bool operator==(const TechnicalityScore&, const TechnicalityScore&) = default;
};

/// Pooled mean probability of original tokens over `rounds` random masked
/// subsets of every sentence. Sampling is seeded by (seed, doc_id), so a
/// document's score does not depend on what else is scored alongside it.
/// Sentences longer than the scorer limit are scored as consecutive chunks.
TechnicalityScore masked_prob(std::string_view doc_id, std::string_view document, const MaskedLMScorer& scorer,
                              std::uint64_t seed, const MaskingConfig& config = {});

enum class DocumentRole { kAbstract, kPls, kGenerated };

std::string_view to_string(DocumentRole role);
DocumentRole parse_role(std::string_view s);

struct Document {
  std::string id;
  DocumentRole role = DocumentRole::kAbstract;
  std::string text;
};

struct ScoredDocument {
  std::string doc_id;
  DocumentRole role = DocumentRole::kAbstract;
  int label = 0;  // abstract 0, otherwise 1
  TechnicalityScore score;

  friend bool operator==(const ScoredDocument&, const ScoredDocument&) = default;
};

std::vector<ScoredDocument> score_documents(std::span<const Document> docs, const MaskedLMScorer& scorer,
                                            std::uint64_t seed, const MaskingConfig& config = {},
                                            Execution exec = Execution::kParallel);

/// One record per abstract and per summary, abstract first within each pair.
std::vector<ScoredDocument> score_corpus(std::span<const DocumentPair> pairs, const MaskedLMScorer& scorer,
                                         std::uint64_t seed, const MaskingConfig& config = {},
                                         Execution exec = Execution::kParallel);

}  // namespace plainscore
