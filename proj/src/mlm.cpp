#include "plainscore/mlm.hpp"

#include <cmath>
#include <random>

#include "plainscore/corpus.hpp"
#include "plainscore/error.hpp"
#include "plainscore/numeric.hpp"
#include "plainscore/text.hpp"

namespace plainscore {

UniformScorer::UniformScorer(std::size_t vocab_size, std::size_t max_tokens) {
  if (vocab_size < 2) {
    throw Error(ErrorKind::kInvalidArgument, "uniform scorer needs a vocabulary of at least 2 tokens");
  }
  info_ = {"uniform-stub", vocab_size, max_tokens, static_cast<TokenId>(vocab_size - 1)};
}

std::vector<TokenId> UniformScorer::tokenize(std::string_view sentence) const {
  std::vector<TokenId> ids;
  for (const auto& tok : tokenize_features(sentence)) {
    ids.push_back(static_cast<TokenId>(fnv1a64(tok) % (info_.vocab_size - 1)));
  }
  return ids;
}

std::vector<double> UniformScorer::fill(std::span<const TokenId>, std::span<const std::size_t> masked_positions) const {
  return std::vector<double>(masked_positions.size(), 1.0 / static_cast<double>(info_.vocab_size));
}

ConstantPerSentenceScorer::ConstantPerSentenceScorer(const std::vector<std::pair<std::string, double>>& sentences,
                                                     double fallback)
    : fallback_(fallback) {
  for (const auto& [text, p] : sentences) {
    for (const auto& w : tokenize_features(text)) {
      word_ids_.try_emplace(w, static_cast<TokenId>(word_ids_.size() + 1));
    }
  }
  info_ = {"constant-stub", word_ids_.size() + 2, 512, static_cast<TokenId>(word_ids_.size() + 1)};
  for (const auto& [text, p] : sentences) {
    by_sentence_[tokenize(text)] = p;
  }
}

std::vector<TokenId> ConstantPerSentenceScorer::tokenize(std::string_view sentence) const {
  std::vector<TokenId> ids;
  for (const auto& w : tokenize_features(sentence)) {
    auto it = word_ids_.find(w);
    ids.push_back(it == word_ids_.end() ? 0 : it->second);
  }
  return ids;
}

std::vector<double> ConstantPerSentenceScorer::fill(std::span<const TokenId> ids,
                                                    std::span<const std::size_t> masked_positions) const {
  double p = fallback_;
  for (const auto& [key, value] : by_sentence_) {
    if (key.size() != ids.size()) {
      continue;
    }
    bool same = true;
    for (std::size_t i = 0; i < ids.size() && same; ++i) {
      same = ids[i] == key[i] || ids[i] == info_.mask_token_id;
    }
    if (same) {
      p = value;
      break;
    }
  }
  return std::vector<double>(masked_positions.size(), p);
}

UnigramScorer::UnigramScorer(std::span<const std::string> training_texts, std::size_t max_tokens) {
  std::vector<std::vector<std::string>> tokenized;
  tokenized.reserve(training_texts.size());
  for (const auto& t : training_texts) {
    tokenized.push_back(tokenize_features(t));
  }
  vocab_ = TokenVocab::build(tokenized);
  std::vector<std::size_t> counts(vocab_.size() + 1, 0);
  std::size_t total = 0;
  for (const auto& doc : tokenized) {
    for (const auto& tok : doc) {
      ++counts[static_cast<std::size_t>(*vocab_.find(tok))];
      ++total;
    }
  }
  const double denom = static_cast<double>(total + counts.size());
  probs_.resize(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    probs_[i] = static_cast<double>(counts[i] + 1) / denom;
  }
  info_ = {"unigram-stub", vocab_.size() + 2, max_tokens, static_cast<TokenId>(vocab_.size() + 1)};
}

std::vector<TokenId> UnigramScorer::tokenize(std::string_view sentence) const {
  std::vector<TokenId> ids;
  const auto unk = static_cast<TokenId>(vocab_.size());
  for (const auto& tok : tokenize_features(sentence)) {
    ids.push_back(vocab_.find(tok).value_or(unk));
  }
  return ids;
}

std::vector<double> UnigramScorer::fill(std::span<const TokenId> ids, std::span<const std::size_t> masked_positions) const {
  std::vector<double> out;
  out.reserve(masked_positions.size());
  for (auto pos : masked_positions) {
    out.push_back(probs_[static_cast<std::size_t>(ids[pos])]);
  }
  return out;
}

std::vector<TokenId> SerializedScorer::tokenize(std::string_view sentence) const {
  std::lock_guard lock(mu_);
  return inner_->tokenize(sentence);
}

std::vector<double> SerializedScorer::fill(std::span<const TokenId> ids, std::span<const std::size_t> masked_positions) const {
  std::lock_guard lock(mu_);
  return inner_->fill(ids, masked_positions);
}

void MaskingConfig::validate() const {
  if (rounds == 0) {
    throw Error(ErrorKind::kInvalidArgument, "masking needs at least one round");
  }
  if (!(mask_frac > 0.0 && mask_frac < 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "mask fraction must lie in (0, 1)");
  }
}

std::size_t masks_per_round(std::size_t n_tokens, double mask_frac) {
  if (n_tokens == 0) {
    return 0;
  }
  const auto k = static_cast<std::size_t>(std::llround(mask_frac * static_cast<double>(n_tokens)));
  return std::min(std::max<std::size_t>(k, 1), n_tokens);
}

TechnicalityScore masked_prob(std::string_view doc_id, std::string_view document, const MaskedLMScorer& scorer,
                              std::uint64_t seed, const MaskingConfig& config) {
  config.validate();
  const std::size_t limit = scorer.max_tokens();
  if (limit == 0) {
    throw Error(ErrorKind::kInvalidArgument, "scorer accepts no tokens");
  }
  TechnicalityScore score;
  score.doc_id = std::string(doc_id);
  std::mt19937_64 rng(derive_seed(seed, doc_id));
  ExactSum total;

  for (const auto& sentence : split_sentences(document)) {
    const auto ids = scorer.tokenize(sentence);
    for (std::size_t begin = 0; begin < ids.size(); begin += limit) {
      const std::span<const TokenId> chunk(ids.data() + begin, std::min(limit, ids.size() - begin));
      const std::size_t k = masks_per_round(chunk.size(), config.mask_frac);
      for (std::size_t r = 0; r < config.rounds; ++r) {
        const auto positions = sample_without_replacement(chunk.size(), k, rng);
        const auto probs = scorer.fill(chunk, positions);
        if (probs.size() != positions.size()) {
          throw Error(ErrorKind::kScorerUnavailable, "scorer returned " + std::to_string(probs.size()) + " probabilities for " +
                                                         std::to_string(positions.size()) + " masked positions");
        }
        for (double p : probs) {
          if (!(p >= 0.0 && p <= 1.0)) {
            throw Error(ErrorKind::kScorerUnavailable, "scorer returned a probability outside [0, 1]");
          }
          total.add(p);
        }
      }
      score.per_sentence_counts.push_back(k * config.rounds);
      score.n_probs += k * config.rounds;
    }
  }
  if (score.n_probs == 0) {
    throw Error(ErrorKind::kDegenerateText, "document '" + score.doc_id + "' has no tokens to mask");
  }
  score.mean_prob = total.mean(score.n_probs);
  return score;
}

std::string_view to_string(DocumentRole role) {
  switch (role) {
    case DocumentRole::kAbstract: return "abstract";
    case DocumentRole::kPls: return "pls";
    case DocumentRole::kGenerated: return "generated";
  }
  return "abstract";
}

DocumentRole parse_role(std::string_view s) {
  if (s == "abstract") return DocumentRole::kAbstract;
  if (s == "pls") return DocumentRole::kPls;
  if (s == "generated") return DocumentRole::kGenerated;
  throw Error(ErrorKind::kParse, "unknown document role '" + std::string(s) + "'");
}

std::vector<ScoredDocument> score_documents(std::span<const Document> docs, const MaskedLMScorer& scorer,
                                            std::uint64_t seed, const MaskingConfig& config, Execution exec) {
  config.validate();
  std::unique_ptr<SerializedScorer> queued;
  const MaskedLMScorer* active = &scorer;
  if (exec == Execution::kParallel && !scorer.thread_safe()) {
    queued = std::make_unique<SerializedScorer>(scorer);
    active = queued.get();
  }
  return indexed_map(docs.size(), exec, [&](std::size_t i) {
    const auto& d = docs[i];
    try {
      return ScoredDocument{d.id, d.role, d.role == DocumentRole::kAbstract ? 0 : 1,
                            masked_prob(d.id, d.text, *active, seed, config)};
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::kScorerUnavailable) {
        throw Error(ErrorKind::kScorerUnavailable, "document '" + d.id + "': " + e.what());
      }
      throw;
    }
  });
}

std::vector<ScoredDocument> score_corpus(std::span<const DocumentPair> pairs, const MaskedLMScorer& scorer,
                                         std::uint64_t seed, const MaskingConfig& config, Execution exec) {
  std::vector<Document> docs;
  docs.reserve(pairs.size() * 2);
  for (const auto& p : pairs) {
    docs.push_back({p.id, DocumentRole::kAbstract, p.abstract_text});
    docs.push_back({p.id, DocumentRole::kPls, p.pls_text});
  }
  return score_documents(docs, scorer, seed, config, exec);
}

}  // namespace plainscore
