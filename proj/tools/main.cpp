#include <CLI11.hpp>

#include <iostream>

#include "commands.hpp"
#include "plainscore/error.hpp"

using namespace plainscore;
using namespace plainscore::cli;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitIO = 2;
constexpr int kExitValidation = 3;
constexpr int kExitScorer = 4;

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kIO: return kExitIO;
    case ErrorKind::kScorerUnavailable: return kExitScorer;
    default: return kExitValidation;
  }
}

template <typename T>
void optional_flag(CLI::App& app, const std::string& name, std::optional<T>& target, const std::string& help) {
  app.add_option_function<T>(name, [&target](const T& v) { target = v; }, help);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"plainscore: plain-language summary corpus and scoring toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  Overrides overrides;
  optional_flag(app, "--config", overrides.config_path, "JSON run configuration");
  optional_flag(app, "--seed", overrides.seed, "Run seed");
  optional_flag(app, "--scorer-url", overrides.scorer_url, "Masked-LM service base URL");
  optional_flag(app, "--temperature", overrides.temperature, "Penalty softmax temperature");
  optional_flag(app, "--alpha", overrides.alpha, "Unlikelihood weight");
  optional_flag(app, "--top-p", overrides.top_p, "Nucleus threshold");
  optional_flag(app, "--cap", overrides.cap, "Token cap for corpus filtering");
  optional_flag(app, "--out-dir", overrides.out_dir, "Output directory");

  std::function<void(const RunConfig&)> action;

  BuildCorpusArgs corpus_args;
  auto* corpus = app.add_subcommand("build-corpus", "Extract and filter aligned abstract/summary pairs");
  corpus->add_option("--input", corpus_args.input, "reviews.jsonl")->required();
  optional_flag(*corpus, "--vocab", corpus_args.vocab, "Subword vocabulary for token counting");
  corpus->callback([&] { action = [&](const RunConfig& c) { build_corpus(c, corpus_args); }; });

  ReadabilityArgs read_args;
  auto* read = app.add_subcommand("readability", "Flesch-Kincaid and ARI per document");
  read->add_option("--input", read_args.input, "pairs.jsonl or document JSONL")->required();
  read->callback([&] { action = [&](const RunConfig& c) { readability(c, read_args); }; });

  MlmScoreArgs mlm_args;
  auto* mlm = app.add_subcommand("mlm-score", "Masked-LM technicality scores");
  mlm->add_option("--input", mlm_args.input, "pairs.jsonl or document JSONL")->required();
  mlm->add_option("--backend", mlm_args.backend, "http or unigram")->check(CLI::IsMember({"http", "unigram"}));
  mlm->callback([&] { action = [&](const RunConfig& c) { mlm_score(c, mlm_args); }; });

  TrainArgs train_args;
  auto* train = app.add_subcommand("train-discriminator", "Bag-of-words logistic discriminator");
  train->add_option("--input", train_args.input, "pairs.jsonl")->required();
  optional_flag(*train, "--newsela", train_args.newsela, "Level-labelled JSONL for a second model");
  optional_flag(*train, "--vocab", train_args.vocab, "Vocabulary file (built from the input otherwise)");
  train->add_option("--min-count", train_args.min_count, "Minimum token count for a built vocabulary");
  train->add_option("--top-k", train_args.top_k, "Tokens listed per side");
  train->callback([&] { action = [&](const RunConfig& c) { train_discriminator_cmd(c, train_args); }; });

  RocArgs roc_args;
  auto* roc_cmd = app.add_subcommand("roc", "ROC curve and AUC of any score file");
  roc_cmd->add_option("--input", roc_args.inputs, "Score JSONL files")->required();
  roc_cmd->add_option("--field", roc_args.fields, "Score fields to evaluate");
  roc_cmd->add_option("--direction", roc_args.direction, "auto, higher or lower")
      ->check(CLI::IsMember({"auto", "higher", "lower"}));
  roc_cmd->callback([&] { action = [&](const RunConfig& c) { roc(c, roc_args); }; });

  UlWeightsArgs ulw_args;
  auto* ulw = app.add_subcommand("ul-weights", "Penalty set from one model, or the sum of two");
  ulw->add_option("--model", ulw_args.models, "Model JSON (repeat to combine)")->required();
  optional_flag(*ulw, "--source", ulw_args.source, "Source label written to the penalty file");
  ulw->callback([&] { action = [&](const RunConfig& c) { ul_weights(c, ulw_args); }; });

  UlCheckArgs ulc_args;
  auto* ulc = app.add_subcommand("ul-check", "Evaluate the unlikelihood objective on fixed distributions");
  ulc->add_option("--distributions", ulc_args.distributions, "Distribution JSON")->required();
  ulc->add_option("--penalties", ulc_args.penalties, "Penalty JSON")->required();
  ulc->add_flag("--mean-per-step", ulc_args.mean_per_step, "Average over steps instead of summing");
  ulc->callback([&] { action = [&](const RunConfig& c) { ul_check(c, ulc_args); }; });

  EvaluateArgs eval_args;
  auto* eval = app.add_subcommand("evaluate", "ROUGE, BLEU, SARI, overlap and length report");
  eval->add_option("--input", eval_args.input, "eval.jsonl")->required();
  optional_flag(*eval, "--compare", eval_args.compare, "Second system's eval.jsonl for paired tests");
  eval->callback([&] { action = [&](const RunConfig& c) { evaluate(c, eval_args); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    const RunConfig config = resolve_config(overrides);
    action(config);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return 0;
}
