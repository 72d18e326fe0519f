#pragma once

#include <string>
#include <vector>

#include "plainscore/discriminator.hpp"
#include "plainscore/vocab.hpp"

namespace plainscore {

struct PenaltyEntry {
  TokenId id = 0;
  double weight = 0.0;  // normalised w'
};

/// Tokens the decoder is penalised for, with softmax-normalised weights.
struct PenaltySet {
  std::vector<PenaltyEntry> entries;  // descending weight, ties by ascending id
  double temperature = 2.0;
  std::string source;       // cochrane | newsela | both
  std::string vocab_id;
  std::string model_hash;

  bool empty() const { return entries.empty(); }
};

/// S = {j : w_j < 0}; w'_j = exp(|w_j|/T) / sum_i exp(|w_i|/T). The bias is not
/// a token and never enters S. Throws kEmptyPenaltySet if no weight is negative.
PenaltySet build_penalty_set(const DiscriminatorModel& model, double temperature = 2.0);

/// Elementwise weight sum (biases summed too). Same vocabulary required.
DiscriminatorModel combine_models(const DiscriminatorModel& a, const DiscriminatorModel& b);

}  // namespace plainscore
