#pragma once

#include <string>

#include "plainscore/mlm.hpp"

namespace plainscore {

/// Client for the masked-LM scoring service:
///   GET  /info      -> {"model_name", "vocab_size", "max_sequence_length", "mask_token_id"}
///   POST /tokenize  {"text"}                   -> {"ids", "tokens"}
///   POST /fill      {"ids", "masked_positions"} -> {"probs"}
/// Transport failures and non-2xx replies raise kScorerUnavailable.
class HttpScorer final : public MaskedLMScorer {
 public:
  /// Fetches /info eagerly. `base_url` like "http://localhost:8000".
  explicit HttpScorer(std::string base_url, int timeout_seconds = 60);

  const ScorerInfo& info() const override { return info_; }
  /// Two slots are reserved for the [CLS]/[SEP] the service adds.
  std::size_t max_tokens() const override;
  std::vector<TokenId> tokenize(std::string_view sentence) const override;
  std::vector<double> fill(std::span<const TokenId> ids, std::span<const std::size_t> masked_positions) const override;

 private:
  std::string post(const std::string& path, const std::string& body, int* status) const;

  std::string scheme_host_port_;
  int timeout_seconds_;
  ScorerInfo info_;
};

}  // namespace plainscore
