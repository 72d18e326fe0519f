#include "plainscore/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <random>

#include "plainscore/error.hpp"
#include "plainscore/numeric.hpp"
#include "plainscore/text.hpp"

namespace plainscore {

namespace {

constexpr std::string_view kAbstractCue = "main results";
constexpr std::string_view kPlsHeadingCues[] = {"find", "found", "evidence", "tell us", "study characteristic"};
constexpr std::string_view kLongformKeywords[] = {"journal", "study", "studies", "trial"};

std::string normalized_heading(std::string_view heading) { return ascii_lower(collapse_whitespace(heading)); }

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) {
    ++b;
  }
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) {
    --e;
  }
  return std::string(s.substr(b, e - b));
}

std::string join_bodies(std::span<const Section> sections) {
  std::string out;
  for (const auto& s : sections) {
    const std::string body = trim(s.body);
    if (body.empty()) {
      continue;
    }
    if (!out.empty()) {
      out += "\n\n";
    }
    out += body;
  }
  return out;
}

std::string join_paragraphs(std::span<const std::string> paras) {
  std::string out;
  for (const auto& p : paras) {
    if (!out.empty()) {
      out += "\n\n";
    }
    out += p;
  }
  return out;
}

Extraction cut_sections(std::span<const Section> sections, std::size_t first) {
  if (first >= sections.size()) {
    return {join_bodies(sections), true, 0};
  }
  return {join_bodies(sections.subspan(first)), false, first};
}

bool mentions_keyword(std::string_view paragraph, std::size_t lead_sentences) {
  const auto sentences = split_sentences(paragraph);
  const std::size_t n = std::min(lead_sentences, sentences.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& tok : tokenize_lower(sentences[i])) {
      if (std::find(std::begin(kLongformKeywords), std::end(kLongformKeywords), tok) != std::end(kLongformKeywords)) {
        return true;
      }
    }
  }
  return false;
}

}  // namespace

Extraction extract_abstract(const RawReview& review) {
  if (review.abstract_sections.empty()) {
    throw Error(ErrorKind::kEmptyAbstract, "review '" + review.id + "' has no abstract sections");
  }
  const auto& sections = review.abstract_sections;
  std::size_t first = sections.size();
  for (std::size_t i = 0; i < sections.size(); ++i) {
    if (normalized_heading(sections[i].heading).find(kAbstractCue) != std::string::npos) {
      first = i;
      break;
    }
  }
  auto out = cut_sections(sections, first);
  if (out.text.empty()) {
    throw Error(ErrorKind::kEmptyAbstract, "review '" + review.id + "' has only empty abstract sections");
  }
  return out;
}

Extraction extract_pls_sectioned(const RawReview& review) {
  if (review.pls_kind != PlsKind::kSectioned) {
    throw Error(ErrorKind::kInvalidArgument, "review '" + review.id + "' has a long-form summary");
  }
  if (review.pls_sections.empty()) {
    throw Error(ErrorKind::kEmptySummary, "review '" + review.id + "' has no summary sections");
  }
  const auto& sections = review.pls_sections;
  std::size_t first = sections.size();
  for (std::size_t i = 0; i < sections.size() && first == sections.size(); ++i) {
    const auto h = normalized_heading(sections[i].heading);
    for (auto cue : kPlsHeadingCues) {
      if (h.find(cue) != std::string::npos) {
        first = i;
        break;
      }
    }
  }
  auto out = cut_sections(sections, first);
  if (out.text.empty()) {
    throw Error(ErrorKind::kEmptySummary, "review '" + review.id + "' has only empty summary sections");
  }
  return out;
}

std::vector<std::string> longform_paragraphs(std::span<const std::string> raw) {
  std::vector<std::string> out;
  for (const auto& block : raw) {
    std::size_t start = 0;
    std::size_t i = 0;
    auto emit = [&](std::size_t end) {
      auto p = trim(std::string_view(block).substr(start, end - start));
      if (!p.empty()) {
        out.push_back(std::move(p));
      }
    };
    while (i < block.size()) {
      if (block[i] == '\n') {
        std::size_t k = i + 1;
        while (k < block.size() && (block[k] == ' ' || block[k] == '\t' || block[k] == '\r')) {
          ++k;
        }
        if (k < block.size() && block[k] == '\n') {
          emit(i);
          start = k + 1;
          i = k + 1;
          continue;
        }
      }
      ++i;
    }
    emit(block.size());
  }
  return out;
}

Extraction extract_pls_longform(const RawReview& review, std::size_t lead_sentences) {
  if (review.pls_kind != PlsKind::kLongform) {
    throw Error(ErrorKind::kInvalidArgument, "review '" + review.id + "' has a sectioned summary");
  }
  const auto paras = longform_paragraphs(review.pls_paragraphs);
  if (paras.empty()) {
    throw Error(ErrorKind::kEmptySummary, "review '" + review.id + "' has an empty summary");
  }
  if (paras.size() == 1) {
    return {paras.front(), false, 0};
  }
  for (std::size_t i = 0; i < paras.size(); ++i) {
    if (mentions_keyword(paras[i], lead_sentences)) {
      return {join_paragraphs(std::span(paras).subspan(i)), false, i};
    }
  }
  return {join_paragraphs(paras), true, 0};
}

Extraction extract_pls(const RawReview& review) {
  return review.pls_kind == PlsKind::kSectioned ? extract_pls_sectioned(review) : extract_pls_longform(review);
}

std::size_t TokenCounter::operator()(std::string_view text) const {
  return subword_ ? subword_->count(text) : tokenize_features(text).size();
}

void FilterConfig::validate() const {
  if (cap == 0) {
    throw Error(ErrorKind::kInvalidArgument, "token cap must be positive");
  }
  if (!(ratio_low > 0.0) || !(ratio_low < ratio_high)) {
    throw Error(ErrorKind::kInvalidArgument, "ratio bounds must satisfy 0 < low < high");
  }
}

std::string_view to_string(RejectReason reason) {
  switch (reason) {
    case RejectReason::kTooLong: return "too_long";
    case RejectReason::kRatioLow: return "ratio_low";
    case RejectReason::kRatioHigh: return "ratio_high";
    case RejectReason::kEmptyAbstract: return "empty_abstract";
    case RejectReason::kEmptySummary: return "empty_summary";
  }
  return "unknown";
}

FilterOutcome filter_pair(std::string id, std::string abstract_text, std::string pls_text, bool flagged,
                          const TokenCounter& counter, const FilterConfig& config) {
  const std::size_t na = counter(abstract_text);
  const std::size_t np = counter(pls_text);
  if (na == 0 || np == 0) {
    throw Error(ErrorKind::kInvalidArgument, "pair '" + id + "' has an empty side");
  }
  auto reject = [&](RejectReason r) -> FilterOutcome { return Rejection{std::move(id), r, na, np}; };
  if (na > config.cap || np > config.cap) {
    return reject(RejectReason::kTooLong);
  }
  const double ratio = static_cast<double>(np) / static_cast<double>(na);
  if (ratio < config.ratio_low) {
    return reject(RejectReason::kRatioLow);
  }
  if (ratio > config.ratio_high) {
    return reject(RejectReason::kRatioHigh);
  }
  return DocumentPair{std::move(id), std::move(abstract_text), std::move(pls_text), na, np, flagged};
}

FilterOutcome process_review(const RawReview& review, const TokenCounter& counter, const FilterConfig& config) {
  Extraction abstract;
  Extraction pls;
  try {
    abstract = extract_abstract(review);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kEmptyAbstract) {
      throw;
    }
    return Rejection{review.id, RejectReason::kEmptyAbstract, 0, 0};
  }
  try {
    pls = extract_pls(review);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kEmptySummary) {
      throw;
    }
    return Rejection{review.id, RejectReason::kEmptySummary, 0, 0};
  }
  return filter_pair(review.id, std::move(abstract.text), std::move(pls.text), abstract.flagged || pls.flagged, counter,
                     config);
}

std::vector<FilterOutcome> run_pipeline(std::span<const RawReview> reviews, const TokenCounter& counter,
                                        const FilterConfig& config, Execution exec) {
  config.validate();
  return indexed_map(reviews.size(), exec, [&](std::size_t i) { return process_review(reviews[i], counter, config); });
}

DatasetSplit split_dataset(std::size_t n_pairs, std::uint64_t seed, const SplitFractions& f) {
  if (n_pairs == 0) {
    throw Error(ErrorKind::kInvalidArgument, "cannot split an empty dataset");
  }
  if (f.train < 0 || f.valid < 0 || f.test < 0 || std::abs(f.train + f.valid + f.test - 1.0) > 1e-9) {
    throw Error(ErrorKind::kInvalidArgument, "split fractions must be non-negative and sum to 1");
  }
  const double n = static_cast<double>(n_pairs);
  const auto n_valid = static_cast<std::size_t>(std::llround(n * f.valid));
  const auto n_test = static_cast<std::size_t>(std::llround(n * f.test));
  if (n_valid + n_test > n_pairs) {
    throw Error(ErrorKind::kInvalidArgument, "split fractions leave no room for the training set");
  }
  std::vector<std::size_t> order(n_pairs);
  for (std::size_t i = 0; i < n_pairs; ++i) {
    order[i] = i;
  }
  std::mt19937_64 rng(seed);
  shuffle_in_place(order, rng);

  const std::size_t n_train = n_pairs - n_valid - n_test;
  DatasetSplit split;
  split.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  split.valid.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train),
                     order.begin() + static_cast<std::ptrdiff_t>(n_train + n_valid));
  split.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train + n_valid), order.end());
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.valid.begin(), split.valid.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

}  // namespace plainscore
