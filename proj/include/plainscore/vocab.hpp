#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace plainscore {

using TokenId = std::int32_t;

/// Bijective token-string <-> dense id mapping.
class TokenVocab {
 public:
  TokenVocab() = default;

  /// Throws kInvalidArgument on duplicate tokens.
  explicit TokenVocab(std::vector<std::string> tokens);

  /// UTF-8, one token per line, line number = id. A trailing '\r' is stripped.
  static TokenVocab load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  /// Tokens seen at least `min_count` times across `tokenized`, ordered by
  /// descending frequency then lexicographically.
  static TokenVocab build(std::span<const std::vector<std::string>> tokenized, std::size_t min_count = 1);

  std::optional<TokenId> find(std::string_view token) const;
  const std::string& token(TokenId id) const { return id_to_token_.at(static_cast<std::size_t>(id)); }
  std::size_t size() const { return id_to_token_.size(); }
  bool empty() const { return id_to_token_.empty(); }
  const std::vector<std::string>& tokens() const { return id_to_token_; }

  /// Content hash used as the vocabulary identifier in model and penalty files.
  std::string fingerprint() const;

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
  };
  std::unordered_map<std::string, TokenId, Hash, std::equal_to<>> token_to_id_;
  std::vector<std::string> id_to_token_;
};

/// Greedy longest-match subword segmentation over a supplied vocabulary.
/// Continuation pieces are looked up with `continuation_prefix` (e.g. "##")
/// when the vocabulary uses one; characters no piece covers count as one
/// unknown token each.
class SubwordTokenizer {
 public:
  explicit SubwordTokenizer(const TokenVocab& vocab, std::string continuation_prefix = "##");

  std::vector<std::string> tokenize(std::string_view text) const;
  std::size_t count(std::string_view text) const { return tokenize(text).size(); }

 private:
  const TokenVocab* vocab_;
  std::string prefix_;
  bool uses_prefix_ = false;
};

}  // namespace plainscore
