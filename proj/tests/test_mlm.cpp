#include <doctest.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>

#include "plainscore/error.hpp"
#include "plainscore/mlm.hpp"

using namespace plainscore;

namespace {

// Records every fill request; probabilities come from a wrapped scorer.
class RecordingScorer final : public MaskedLMScorer {
 public:
  RecordingScorer(const MaskedLMScorer& inner, std::size_t max_tokens) : inner_(inner), max_(max_tokens) {}
  const ScorerInfo& info() const override { return inner_.info(); }
  std::size_t max_tokens() const override { return max_; }
  std::vector<TokenId> tokenize(std::string_view s) const override { return inner_.tokenize(s); }
  std::vector<double> fill(std::span<const TokenId> ids, std::span<const std::size_t> pos) const override {
    std::lock_guard lock(mu_);
    calls.push_back({ids.size(), std::vector<std::size_t>(pos.begin(), pos.end())});
    return inner_.fill(ids, pos);
  }
  struct Call {
    std::size_t n_ids;
    std::vector<std::size_t> positions;
  };
  mutable std::vector<Call> calls;

 private:
  const MaskedLMScorer& inner_;
  std::size_t max_;
  mutable std::mutex mu_;
};

// Adds a fixed amount to every probability of the wrapped scorer (capped at 1).
class ShiftedScorer final : public MaskedLMScorer {
 public:
  ShiftedScorer(const MaskedLMScorer& inner, double delta) : inner_(inner), delta_(delta) {}
  const ScorerInfo& info() const override { return inner_.info(); }
  std::vector<TokenId> tokenize(std::string_view s) const override { return inner_.tokenize(s); }
  std::vector<double> fill(std::span<const TokenId> ids, std::span<const std::size_t> pos) const override {
    auto p = inner_.fill(ids, pos);
    for (double& x : p) x = std::min(1.0, x + delta_);
    return p;
  }

 private:
  const MaskedLMScorer& inner_;
  double delta_;
};

// Higher probability for sentences mentioning "CI".
class JargonScorer final : public MaskedLMScorer {
 public:
  JargonScorer() : inner_(std::vector<std::string>{"CI"}) { ci_ = inner_.tokenize("CI").front(); }
  const ScorerInfo& info() const override { return inner_.info(); }
  std::vector<TokenId> tokenize(std::string_view s) const override { return inner_.tokenize(s); }
  std::vector<double> fill(std::span<const TokenId> ids, std::span<const std::size_t> pos) const override {
    const bool jargon = std::find(ids.begin(), ids.end(), ci_) != ids.end();
    return std::vector<double>(pos.size(), jargon ? 0.6 : 0.3);
  }
  bool thread_safe() const override { return false; }

 private:
  UnigramScorer inner_;
  TokenId ci_;
};

class BrokenScorer final : public MaskedLMScorer {
 public:
  explicit BrokenScorer(bool wrong_size) : wrong_size_(wrong_size), inner_(50) {}
  const ScorerInfo& info() const override { return inner_.info(); }
  std::vector<TokenId> tokenize(std::string_view s) const override { return inner_.tokenize(s); }
  std::vector<double> fill(std::span<const TokenId>, std::span<const std::size_t> pos) const override {
    if (wrong_size_) return std::vector<double>(pos.size() + 1, 0.5);
    return std::vector<double>(pos.size(), 1.5);
  }

 private:
  bool wrong_size_;
  UniformScorer inner_;
};

std::string sentence_of(std::size_t n_tokens, const std::string& word) {
  std::string s;
  for (std::size_t i = 0; i + 1 < n_tokens; ++i) s += (i == 0 ? "" : " ") + word + std::to_string(i);
  return s + ".";
}

const char* kAbstract =
    "Twelve trials met the inclusion criteria (RR 0.81, 95% CI 0.70 to 0.94). Heterogeneity was moderate. "
    "The pooled effect (95% CI 0.2 to 0.4) favoured treatment.";
const char* kSummary = "We found twelve studies. People who took the drug felt better. Side effects were rare.";

}  // namespace

TEST_CASE("uniform scorer gives exactly 1/V") {
  const UniformScorer uniform(100);
  for (const char* doc : {kAbstract, kSummary, "One.", "A b c d e f g h i j k l m n o p q r s t u v w x y z."}) {
    CHECK(masked_prob("d", doc, uniform, 5).mean_prob == 1.0 / 100.0);
  }
  std::string long_doc;
  for (int i = 0; i < 40; ++i) long_doc += sentence_of(3 + static_cast<std::size_t>(i) * 7, "w") + " ";
  const auto s = masked_prob("long", long_doc, uniform, 9);
  CHECK(s.mean_prob == 0.01);
  CHECK(s.n_probs > 1000);
  for (std::size_t v : {3u, 7u, 30522u}) {
    CHECK(masked_prob("x", long_doc, UniformScorer(v), 1).mean_prob == 1.0 / static_cast<double>(v));
  }
}

TEST_CASE("pooled mean over sentences of different length") {
  const std::string s1 = sentence_of(10, "Alpha");
  const std::string s2 = sentence_of(20, "Beta");
  const ConstantPerSentenceScorer scorer({{s1, 0.2}, {s2, 0.4}});
  REQUIRE(scorer.tokenize(s1).size() == 10);
  REQUIRE(scorer.tokenize(s2).size() == 20);
  const auto score = masked_prob("doc", s1 + " " + s2, scorer, 123);
  CHECK(score.n_probs == 50);
  CHECK(score.per_sentence_counts == std::vector<std::size_t>{20, 30});
  CHECK(score.mean_prob == 0.32);
  const double mean_of_means = (0.2 + 0.4) / 2.0;
  CHECK(score.mean_prob != mean_of_means);
}

TEST_CASE("mask count per sentence round") {
  for (std::size_t n = 1; n <= 600; ++n) {
    const std::size_t rounded = (15 * n + 50) / 100;  // half-up rounding of 0.15 n in integers
    CHECK(masks_per_round(n, 0.15) == std::max<std::size_t>(1, rounded));
  }
  CHECK(masks_per_round(0, 0.15) == 0);
  CHECK(masks_per_round(3, 0.9) == 3);

  const UniformScorer uniform(1000);
  for (std::size_t n : {1u, 2u, 6u, 10u, 37u, 120u, 599u}) {
    RecordingScorer rec(uniform, 1000);
    masked_prob("s", sentence_of(n, "t"), rec, 77);
    REQUIRE(rec.calls.size() == 10);
    for (const auto& call : rec.calls) {
      CHECK(call.n_ids == n);
      CHECK(call.positions.size() == masks_per_round(n, 0.15));
      CHECK(std::is_sorted(call.positions.begin(), call.positions.end()));
      CHECK(std::adjacent_find(call.positions.begin(), call.positions.end()) == call.positions.end());
      CHECK(call.positions.back() < n);
    }
  }
}

TEST_CASE("sentences longer than the scorer limit are chunked") {
  const UniformScorer uniform(100);
  RecordingScorer rec(uniform, 4);
  const auto score = masked_prob("c", sentence_of(10, "t"), rec, 1, MaskingConfig{3, 0.15});
  CHECK(score.per_sentence_counts == std::vector<std::size_t>{3, 3, 3});
  REQUIRE(rec.calls.size() == 9);
  CHECK(rec.calls[0].n_ids == 4);
  CHECK(rec.calls[3].n_ids == 4);
  CHECK(rec.calls[6].n_ids == 2);
}

TEST_CASE("scores are monotone under pointwise larger fills") {
  const std::vector<std::string> training{kAbstract, kSummary};
  const UnigramScorer base(training);
  const ShiftedScorer larger(base, 0.05);
  for (const char* doc : {kAbstract, kSummary}) {
    const auto a = masked_prob("m", doc, base, 3);
    const auto b = masked_prob("m", doc, larger, 3);
    CHECK(b.mean_prob >= a.mean_prob);
    CHECK(a.mean_prob >= 0.0);
    CHECK(b.mean_prob <= 1.0);
  }
}

TEST_CASE("corpus scoring") {
  const std::vector<DocumentPair> pairs{{"p1", kAbstract, kSummary, 0, 0, false},
                                        {"p2", std::string(kAbstract) + " Rates fell (CI 1 to 2).",
                                         "Fewer people got sick.", 0, 0, false}};
  const JargonScorer jargon;
  const auto scored = score_corpus(pairs, jargon, 42);
  REQUIRE(scored.size() == 4);
  CHECK(scored[0].role == DocumentRole::kAbstract);
  CHECK(scored[0].label == 0);
  CHECK(scored[1].role == DocumentRole::kPls);
  CHECK(scored[1].label == 1);
  CHECK(scored[2].doc_id == "p2");
  CHECK(scored[0].score.mean_prob > scored[1].score.mean_prob);
  CHECK(scored[2].score.mean_prob > scored[3].score.mean_prob);

  CHECK(score_corpus(pairs, jargon, 42) == scored);
  CHECK(score_corpus(pairs, jargon, 42, {}, Execution::kSerial) == scored);
}

TEST_CASE("parallel scoring equals serial scoring") {
  std::vector<Document> docs;
  for (int i = 0; i < 40; ++i) {
    docs.push_back({"d" + std::to_string(i), i % 2 ? DocumentRole::kPls : DocumentRole::kAbstract,
                    std::string(i % 3 ? kAbstract : kSummary) + " " + sentence_of(5 + static_cast<std::size_t>(i), "x")});
  }
  const std::vector<std::string> training{kAbstract, kSummary};
  const UnigramScorer unigram(training);
  const auto serial = score_documents(docs, unigram, 11, {}, Execution::kSerial);
  const auto parallel = score_documents(docs, unigram, 11, {}, Execution::kParallel);
  CHECK(serial == parallel);

  std::vector<Document> reversed(docs.rbegin(), docs.rend());
  const auto rev = score_documents(reversed, unigram, 11);
  CHECK(rev.front().score == serial.back().score);
  CHECK(score_documents(docs, unigram, 12, {}, Execution::kSerial) != serial);
}

TEST_CASE("scorer failures and invalid input") {
  const std::vector<Document> docs{{"bad-doc", DocumentRole::kAbstract, "Some words here."}};
  for (bool wrong_size : {true, false}) {
    const BrokenScorer broken(wrong_size);
    try {
      score_documents(docs, broken, 1);
      FAIL("expected ScorerUnavailable");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kScorerUnavailable);
      CHECK(std::string(e.what()).find("bad-doc") != std::string::npos);
    }
  }
  const UniformScorer uniform(10);
  try {
    masked_prob("empty", "  ", uniform, 1);
    FAIL("expected DegenerateText");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kDegenerateText);
  }
  CHECK_THROWS_AS(masked_prob("x", "A b.", uniform, 1, MaskingConfig{10, 0.0}), Error);
  CHECK_THROWS_AS(masked_prob("x", "A b.", uniform, 1, MaskingConfig{0, 0.15}), Error);
  CHECK(parse_role("generated") == DocumentRole::kGenerated);
  CHECK_THROWS_AS(parse_role("other"), Error);
}
