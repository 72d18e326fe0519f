#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include <omp.h>

#include "plainscore/corpus.hpp"
#include "plainscore/discriminator.hpp"
#include "plainscore/metrics.hpp"
#include "plainscore/mlm.hpp"
#include "plainscore/text.hpp"

using namespace plainscore;

namespace {

const std::vector<std::string> kWords = {"patients", "trial",  "placebo", "risk",   "people", "found",  "dose",
                                         "outcome",  "review", "cohort",  "helped", "we",     "studies", "effect",
                                         "adverse",  "events", "small",   "doctors", "data",  "benefit"};

std::string random_text(std::mt19937_64& rng, std::size_t sentences) {
  std::string s;
  for (std::size_t i = 0; i < sentences; ++i) {
    const std::size_t n = 6 + rng() % 14;
    for (std::size_t w = 0; w < n; ++w) {
      std::string word = kWords[rng() % kWords.size()];
      if (w == 0) word[0] = static_cast<char>(word[0] - 'a' + 'A');
      s += word + (w + 1 == n ? ". " : " ");
    }
  }
  return s;
}

template <typename Fn>
double seconds(Fn&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <typename Fn>
void compare(const char* name, Fn&& kernel) {
  decltype(kernel(Execution::kSerial)) serial, parallel;
  const double ts = seconds([&] { serial = kernel(Execution::kSerial); });
  const double tp = seconds([&] { parallel = kernel(Execution::kParallel); });
  std::printf("%-22s serial %8.3f s  parallel %8.3f s  speedup %5.2fx  identical %s\n", name, ts, tp, ts / tp,
              serial == parallel ? "yes" : "NO");
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t n_docs = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 400;
  std::printf("threads %d, documents %zu\n", omp_get_max_threads(), n_docs);

  std::mt19937_64 rng(1);
  std::vector<DocumentPair> pairs;
  std::vector<EvalRecord> records;
  std::vector<std::string> texts;
  for (std::size_t i = 0; i < n_docs; ++i) {
    const std::string id = "d" + std::to_string(i);
    pairs.push_back({id, random_text(rng, 14), random_text(rng, 6), 0, 0, false});
    records.push_back({id, pairs.back().abstract_text, pairs.back().pls_text, random_text(rng, 6)});
    texts.push_back(pairs.back().abstract_text);
    texts.push_back(pairs.back().pls_text);
  }

  const UnigramScorer scorer(texts);
  compare("masked_prob corpus", [&](Execution e) { return score_corpus(pairs, scorer, 7, {}, e); });

  compare("evaluate_records", [&](Execution e) {
    const auto m = evaluate_records(records, e);
    std::vector<double> flat;
    for (const auto& d : m) {
      flat.insert(flat.end(), {d.rouge1, d.rouge2, d.rougeL, d.bleu, d.sari});
    }
    return flat;
  });

  std::vector<std::vector<std::string>> tokenized;
  for (const auto& t : texts) tokenized.push_back(tokenize_features(t));
  const auto vocab = TokenVocab::build(tokenized);
  std::vector<LabeledExample> examples;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    examples.push_back({bow_vector(texts[i], vocab).vector, static_cast<int>(i % 2)});
  }
  compare("cross_validate 5-fold", [&](Execution e) {
    return cross_validate(examples, vocab.size(), TrainConfig{1e-3, 500, 1e-6, 0}, 5, e).fold_accuracy;
  });
  return 0;
}
