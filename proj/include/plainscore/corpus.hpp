#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "plainscore/execution.hpp"
#include "plainscore/vocab.hpp"

namespace plainscore {

struct Section {
  std::string heading;  // may be empty
  std::string body;     // trimmed, non-empty
};

enum class PlsKind { kSectioned, kLongform };

struct RawReview {
  std::string id;
  std::vector<Section> abstract_sections;
  PlsKind pls_kind = PlsKind::kSectioned;
  std::vector<Section> pls_sections;      // kSectioned only
  std::vector<std::string> pls_paragraphs;  // kLongform only
};

/// Result of cutting a document at its alignment point. `flagged` is set when
/// no cue matched and the whole text was kept for manual review.
struct Extraction {
  std::string text;
  bool flagged = false;
  std::size_t first_kept = 0;  // index of the first kept section/paragraph
};

/// Abstract from the first "main results" heading onward (bodies joined by a blank line).
Extraction extract_abstract(const RawReview& review);

/// Sectioned PLS from the first heading containing find/found/evidence/tell us/study characteristic.
Extraction extract_pls_sectioned(const RawReview& review);

/// Long-form PLS from the first paragraph whose leading sentences mention
/// journal/study/studies/trial as whole words. One-paragraph summaries are kept whole.
Extraction extract_pls_longform(const RawReview& review, std::size_t lead_sentences = 2);

Extraction extract_pls(const RawReview& review);

/// Paragraphs of a long-form summary: the supplied strings, further split on blank lines, trimmed.
std::vector<std::string> longform_paragraphs(std::span<const std::string> raw);

/// Counts tokens for the length cap and ratio filter: greedy subword
/// segmentation when a vocabulary is supplied, feature tokens otherwise.
class TokenCounter {
 public:
  TokenCounter() = default;
  explicit TokenCounter(const TokenVocab& vocab) : subword_(SubwordTokenizer(vocab)) {}

  std::size_t operator()(std::string_view text) const;

 private:
  std::optional<SubwordTokenizer> subword_;
};

struct FilterConfig {
  std::size_t cap = 1024;
  double ratio_low = 0.2;
  double ratio_high = 1.3;

  void validate() const;
};

struct DocumentPair {
  std::string id;
  std::string abstract_text;
  std::string pls_text;
  std::size_t abstract_token_count = 0;
  std::size_t pls_token_count = 0;
  bool flagged = false;

  friend bool operator==(const DocumentPair&, const DocumentPair&) = default;
};

enum class RejectReason { kTooLong, kRatioLow, kRatioHigh, kEmptyAbstract, kEmptySummary };

std::string_view to_string(RejectReason reason);

struct Rejection {
  std::string id;
  RejectReason reason = RejectReason::kTooLong;
  std::size_t abstract_token_count = 0;
  std::size_t pls_token_count = 0;

  friend bool operator==(const Rejection&, const Rejection&) = default;
};

using FilterOutcome = std::variant<DocumentPair, Rejection>;

/// Accepts iff both counts are within the cap and pls/abstract lies in
/// [ratio_low, ratio_high]. Exactly one reason per rejection, checked in the
/// order too_long, ratio_low, ratio_high.
FilterOutcome filter_pair(std::string id, std::string abstract_text, std::string pls_text, bool flagged,
                          const TokenCounter& counter, const FilterConfig& config = {});

/// Extraction + filtering for one review. Extraction failures become rejections.
FilterOutcome process_review(const RawReview& review, const TokenCounter& counter, const FilterConfig& config = {});

/// Per-review processing; results are in input order for both execution modes.
std::vector<FilterOutcome> run_pipeline(std::span<const RawReview> reviews, const TokenCounter& counter,
                                        const FilterConfig& config = {}, Execution exec = Execution::kParallel);

struct SplitFractions {
  // Reproduces the 3568/411/480 split of 4459 pairs exactly.
  double train = 3568.0 / 4459.0;
  double valid = 411.0 / 4459.0;
  double test = 480.0 / 4459.0;
};

struct DatasetSplit {
  std::vector<std::size_t> train, valid, test;  // indices into the input, ascending
};

/// Seeded shuffle, then valid = round(n*valid), test = round(n*test), train = rest.
DatasetSplit split_dataset(std::size_t n_pairs, std::uint64_t seed, const SplitFractions& fractions = {});

}  // namespace plainscore
