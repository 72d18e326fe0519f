#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "oracles/metrics_oracle.hpp"
#include "plainscore/error.hpp"
#include "plainscore/metrics.hpp"

using namespace plainscore;

namespace {

Tokens random_tokens(std::mt19937_64& rng, std::size_t min_len, std::size_t max_len) {
  static const std::vector<std::string> alphabet{"a", "b", "c", "d", "e"};
  const std::size_t n = min_len + rng() % (max_len - min_len + 1);
  Tokens t;
  for (std::size_t i = 0; i < n; ++i) t.push_back(alphabet[rng() % alphabet.size()]);
  return t;
}

std::string join(const Tokens& t) {
  std::string s;
  for (const auto& w : t) s += (s.empty() ? "" : " ") + w;
  return s;
}

}  // namespace

TEST_CASE("rouge hand examples") {
  CHECK(rouge_f1("a b c", "a b d", RougeVariant::kRouge1) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(rouge_f1("a b c", "a b d", RougeVariant::kRouge2) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(rouge_f1("a b c", "a b d", RougeVariant::kRougeL) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  for (auto v : {RougeVariant::kRouge1, RougeVariant::kRouge2, RougeVariant::kRougeL}) {
    CHECK(rouge_f1("the cat sat", "the cat sat", v) == 1.0);
    CHECK(rouge_f1("x y z", "p q r", v) == 0.0);
  }
  CHECK(rouge_f1("a", "a", RougeVariant::kRouge2) == 1.0);
  CHECK(rouge_f1("a", "b", RougeVariant::kRouge2) == 0.0);
  CHECK_THROWS_AS(rouge_f1("", "a", RougeVariant::kRouge1), Error);
}

TEST_CASE("bleu hand examples") {
  const auto r = bleu("a b c", "a b c d");
  CHECK(std::abs(r.score - 0.7165) <= 1e-4);
  CHECK(std::abs(r.score - std::exp(1.0 - 4.0 / 3.0)) <= 1e-15);
  CHECK(r.orders_used == 3);
  CHECK_FALSE(r.smoothed);
  CHECK(bleu("the same words here", "the same words here").score == 1.0);

  const auto none = bleu("x y", "a b");
  CHECK(none.smoothed);
  CHECK(std::abs(none.score - std::sqrt((1.0 / 3.0) * (1.0 / 2.0))) <= 1e-15);
  CHECK(bleu("x", "a").score == 0.5);
  CHECK_THROWS_AS(bleu("a", "a", 5), Error);
  CHECK_THROWS_AS(bleu("a", ""), Error);
}

TEST_CASE("sari hand examples") {
  const std::vector<std::string> ref_ac{"a c"};
  CHECK(sari("a b", "a c", ref_ac) == doctest::Approx(1.0).epsilon(1e-15));
  const std::vector<std::string> ref_src{"a b c d"};
  CHECK(sari("a b c d", "a b c d", ref_src) == doctest::Approx(1.0).epsilon(1e-15));

  const Tokens src{"a", "b", "c", "d"};
  const std::vector<Tokens> refs{{"a", "x", "c", "d"}};
  const double unchanged = sari(src, src, refs);
  CHECK(unchanged == doctest::Approx(oracle::sari(src, src, refs)).epsilon(1e-12));
  CHECK(unchanged < 1.0);
  CHECK_THROWS_AS(sari("a", "a", std::vector<std::string>{}), Error);
}

TEST_CASE("overlap and length hand examples") {
  CHECK(ngram_overlap("a b c d", "a b x d", 1) == 0.75);
  CHECK(ngram_overlap("a b c d", "a b x d", 2) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  for (std::size_t n = 1; n <= 3; ++n) CHECK(ngram_overlap("b c d", "a b c d e", n) == 1.0);
  CHECK(ngram_overlap("a a a b", "a", 1) == 0.5);
  try {
    ngram_overlap("a b", "a b", 3);
    FAIL("expected TooShort");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kTooShort);
  }

  CHECK(length_stats("").n_tokens == 0);
  CHECK(length_stats("").n_sentences == 0);
  CHECK(length_stats("A b. C d.").n_tokens == 4);
  CHECK(length_stats("A b. C d.").n_sentences == 2);
}

TEST_CASE("overlap decreases with n on nested fixtures") {
  const std::string source = "patients given the drug recovered faster than those given placebo";
  const std::string candidate = "patients given the drug recovered faster overall than those on placebo";
  double prev = 2.0;
  for (std::size_t n = 1; n <= 4; ++n) {
    const double o = ngram_overlap(candidate, source, n);
    CHECK(o <= prev);
    prev = o;
  }
}

TEST_CASE("metrics match brute-force definitions on random cases") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    const Tokens src = random_tokens(rng, 1, 9);
    const Tokens cand = random_tokens(rng, 1, 9);
    const Tokens ref = random_tokens(rng, 1, 9);
    CAPTURE(join(src));
    CAPTURE(join(cand));
    CAPTURE(join(ref));

    CHECK(std::abs(rouge_f1(cand, ref, RougeVariant::kRouge1) - oracle::rouge_n(cand, ref, 1)) <= 1e-9);
    CHECK(std::abs(rouge_f1(cand, ref, RougeVariant::kRouge2) - oracle::rouge_n(cand, ref, 2)) <= 1e-9);
    CHECK(std::abs(rouge_f1(cand, ref, RougeVariant::kRougeL) - oracle::rouge_l(cand, ref)) <= 1e-9);

    const auto b = bleu(cand, ref);
    const auto ob = oracle::bleu(cand, ref);
    CHECK(std::abs(b.score - ob.score) <= 1e-9);
    CHECK(b.smoothed == ob.smoothed);

    const std::vector<Tokens> refs{ref};
    CHECK(std::abs(sari(src, cand, refs) - oracle::sari(src, cand, refs)) <= 1e-9);
    const std::vector<Tokens> two_refs{ref, random_tokens(rng, 1, 9)};
    CHECK(std::abs(sari(src, cand, two_refs) - oracle::sari(src, cand, two_refs)) <= 1e-9);

    for (std::size_t n = 1; n <= std::min<std::size_t>(4, cand.size()); ++n) {
      CHECK(ngram_overlap(cand, src, n) == oracle::overlap(cand, src, n));
    }
    CHECK(oracle::lcs(cand, ref) <= std::min(cand.size(), ref.size()));
  }
}

TEST_CASE("identity, case and whitespace invariance") {
  const std::string x = "Readers found the summary clear and short";
  const std::string shouty = "  READERS found\tthe   Summary\n clear AND short ";
  for (auto v : {RougeVariant::kRouge1, RougeVariant::kRouge2, RougeVariant::kRougeL}) {
    CHECK(rouge_f1(x, x, v) == 1.0);
    CHECK(rouge_f1(shouty, "the summary was clear", v) == rouge_f1(x, "the summary was clear", v));
  }
  CHECK(bleu(x, x).score == 1.0);
  CHECK(bleu(shouty, "the summary was clear").score == bleu(x, "the summary was clear").score);
  for (std::size_t n = 1; n <= 4; ++n) {
    CHECK(ngram_overlap(x, x, n) == 1.0);
    CHECK(ngram_overlap(shouty, "the summary is clear", n) == ngram_overlap(x, "the summary is clear", n));
  }
}

TEST_CASE("record evaluation") {
  std::vector<EvalRecord> records;
  std::mt19937_64 rng(5);
  for (int i = 0; i < 40; ++i) {
    records.push_back({"d" + std::to_string(i), join(random_tokens(rng, 5, 30)) + ".",
                       join(random_tokens(rng, 3, 20)) + ".", join(random_tokens(rng, 1, 20)) + "."});
  }
  records.push_back({"short", "A b c. D e.", "a b", "a"});
  const auto serial = evaluate_records(records, Execution::kSerial);
  const auto parallel = evaluate_records(records, Execution::kParallel);
  REQUIRE(serial.size() == records.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].doc_id == records[i].doc_id);
    CHECK(serial[i].rouge1 == parallel[i].rouge1);
    CHECK(serial[i].rougeL == parallel[i].rougeL);
    CHECK(serial[i].bleu == parallel[i].bleu);
    CHECK(serial[i].sari == parallel[i].sari);
    for (double m : {serial[i].rouge1, serial[i].rouge2, serial[i].rougeL, serial[i].bleu, serial[i].sari}) {
      CHECK(m >= 0.0);
      CHECK(m <= 1.0);
    }
  }
  const auto& last = serial.back();
  CHECK(last.overlap[0].has_value());
  CHECK_FALSE(last.overlap[1].has_value());
  CHECK(last.reference_overlap[1].has_value());
  CHECK(last.source_length.n_sentences == 2);

  const auto same = evaluate_record({"x", "the source text here.", "a plain summary.", "a plain summary."});
  CHECK(same.rouge1 == 1.0);
  CHECK(same.rouge2 == 1.0);
  CHECK(same.rougeL == 1.0);
  CHECK(same.bleu == 1.0);
  CHECK_THROWS_AS(evaluate_record({"x", "", "a", "a"}), Error);
}
