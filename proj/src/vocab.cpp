#include "plainscore/vocab.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>

#include "plainscore/error.hpp"
#include "plainscore/numeric.hpp"
#include "plainscore/text.hpp"
#include "utf8.hpp"

namespace plainscore {

TokenVocab::TokenVocab(std::vector<std::string> tokens) : id_to_token_(std::move(tokens)) {
  token_to_id_.reserve(id_to_token_.size());
  for (std::size_t i = 0; i < id_to_token_.size(); ++i) {
    auto [it, inserted] = token_to_id_.emplace(id_to_token_[i], static_cast<TokenId>(i));
    if (!inserted) {
      throw Error(ErrorKind::kInvalidArgument, "duplicate vocabulary token '" + id_to_token_[i] + "' at id " +
                                                   std::to_string(i) + " (first at id " + std::to_string(it->second) + ")");
    }
  }
}

TokenVocab TokenVocab::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::kIO, "cannot open vocabulary " + path.string());
  }
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    tokens.push_back(line);
  }
  return TokenVocab(std::move(tokens));
}

void TokenVocab::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorKind::kIO, "cannot write vocabulary " + path.string());
  }
  for (const auto& t : id_to_token_) {
    out << t << '\n';
  }
}

TokenVocab TokenVocab::build(std::span<const std::vector<std::string>> tokenized, std::size_t min_count) {
  std::map<std::string, std::size_t> counts;
  for (const auto& doc : tokenized) {
    for (const auto& t : doc) {
      ++counts[t];
    }
  }
  std::vector<std::pair<std::string, std::size_t>> kept;
  for (auto& [tok, c] : counts) {
    if (c >= min_count) {
      kept.emplace_back(tok, c);
    }
  }
  std::stable_sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> tokens;
  tokens.reserve(kept.size());
  for (auto& [tok, c] : kept) {
    tokens.push_back(std::move(tok));
  }
  return TokenVocab(std::move(tokens));
}

std::optional<TokenId> TokenVocab::find(std::string_view token) const {
  auto it = token_to_id_.find(token);
  if (it == token_to_id_.end()) {
    return std::nullopt;
  }
  return it->second;
}

std::string TokenVocab::fingerprint() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& t : id_to_token_) {
    h = fnv1a64(t, h);
    h = fnv1a64("\n", h);
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx/%zu", static_cast<unsigned long long>(h), id_to_token_.size());
  return buf;
}

namespace {
constexpr std::string_view kSpaceMarker = "\xC4\xA0";  // U+0120, byte-level BPE leading-space marker
}

SubwordTokenizer::SubwordTokenizer(const TokenVocab& vocab, std::string continuation_prefix)
    : vocab_(&vocab), prefix_(std::move(continuation_prefix)) {
  for (const auto& t : vocab.tokens()) {
    if (!prefix_.empty() && t.size() > prefix_.size() && t.compare(0, prefix_.size(), prefix_) == 0) {
      uses_prefix_ = true;
      break;
    }
  }
}

std::vector<std::string> SubwordTokenizer::tokenize(std::string_view text) const {
  std::vector<std::string> out;
  for (const auto& word : tokenize_features(text)) {
    std::size_t pos = 0;
    while (pos < word.size()) {
      std::size_t best = 0;
      std::string best_piece;
      // Candidate ends on code point boundaries, longest first.
      std::vector<std::size_t> ends;
      for (std::size_t p = pos; p < word.size();) {
        p += detail::decode_utf8(word, p).length;
        ends.push_back(p);
      }
      for (auto it = ends.rbegin(); it != ends.rend() && best == 0; ++it) {
        const std::string_view piece(word.data() + pos, *it - pos);
        std::string candidates[2];
        if (pos == 0) {
          candidates[0] = std::string(kSpaceMarker) + std::string(piece);
          candidates[1] = std::string(piece);
        } else {
          candidates[0] = uses_prefix_ ? prefix_ + std::string(piece) : std::string(piece);
        }
        for (auto& c : candidates) {
          if (!c.empty() && vocab_->find(c)) {
            best = *it - pos;
            best_piece = std::move(c);
            break;
          }
        }
      }
      if (best == 0) {
        const auto len = detail::decode_utf8(word, pos).length;
        out.emplace_back("[UNK]");
        pos += len;
      } else {
        out.push_back(std::move(best_piece));
        pos += best;
      }
    }
  }
  return out;
}

}  // namespace plainscore
