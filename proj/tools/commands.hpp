#pragma once

#include <optional>
#include <string>
#include <vector>

#include "run_config.hpp"

namespace plainscore::cli {

struct BuildCorpusArgs {
  std::string input;
  std::optional<std::string> vocab;  // subword vocabulary for token counting
};

struct ReadabilityArgs {
  std::string input;
};

struct MlmScoreArgs {
  std::string input;
  std::string backend = "http";  // http | unigram
};

struct TrainArgs {
  std::string input;
  std::optional<std::string> newsela;
  std::optional<std::string> vocab;
  std::size_t min_count = 1;
  std::size_t top_k = 10;
};

struct RocArgs {
  std::vector<std::string> inputs;
  std::vector<std::string> fields{"mean_prob"};
  std::string direction = "auto";  // auto | higher | lower
};

struct UlWeightsArgs {
  std::vector<std::string> models;
  std::optional<std::string> source;
};

struct UlCheckArgs {
  std::string distributions;
  std::string penalties;
  bool mean_per_step = false;
};

struct EvaluateArgs {
  std::string input;
  std::optional<std::string> compare;
};

void build_corpus(const RunConfig& config, const BuildCorpusArgs& args);
void readability(const RunConfig& config, const ReadabilityArgs& args);
void mlm_score(const RunConfig& config, const MlmScoreArgs& args);
void train_discriminator_cmd(const RunConfig& config, const TrainArgs& args);
void roc(const RunConfig& config, const RocArgs& args);
void ul_weights(const RunConfig& config, const UlWeightsArgs& args);
void ul_check(const RunConfig& config, const UlCheckArgs& args);
void evaluate(const RunConfig& config, const EvaluateArgs& args);

}  // namespace plainscore::cli
