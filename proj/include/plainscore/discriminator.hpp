#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "plainscore/execution.hpp"
#include "plainscore/text.hpp"
#include "plainscore/vocab.hpp"

namespace plainscore {

/// Bag-of-words example; label 1 = simple (PLS / easier level), 0 = technical.
struct LabeledExample {
  SparseVector x;
  int y = 0;
};

struct TrainConfig {
  double lambda = 1e-4;
  std::size_t max_iter = 5000;
  double grad_tol = 1e-6;
  std::uint64_t seed = 0;  // recorded; the optimiser itself draws no randomness
};

struct TrainingMeta {
  std::uint64_t seed = 0;
  double lambda = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  double final_loss = 0.0;
  double grad_inf_norm = 0.0;
  std::string source;  // "cochrane", "newsela", "both", ...
  std::vector<std::string> parents;  // hashes of models this one was combined from
};

struct DiscriminatorModel {
  std::vector<double> weights;  // indexed by vocabulary id
  double bias = 0.0;
  std::string vocab_id;  // TokenVocab::fingerprint()
  TrainingMeta meta;

  std::size_t dim() const { return weights.size(); }
  /// Content hash of weights and bias, for provenance records.
  std::string hash() const;
};

/// mean_i softplus-loss(w.x_i + b, y_i) + lambda/2 * |w|^2; bias unregularised.
class LogisticObjective {
 public:
  LogisticObjective(std::span<const LabeledExample> examples, std::size_t dim, double lambda);

  double value(std::span<const double> w, double b) const;
  /// Fills grad_w (size dim) and grad_b; returns the loss.
  double value_and_gradient(std::span<const double> w, double b, std::span<double> grad_w, double& grad_b) const;

  std::size_t dim() const { return dim_; }

 private:
  std::span<const LabeledExample> examples_;
  std::size_t dim_;
  double lambda_;
};

/// Full-batch gradient descent from zero with Barzilai-Borwein trial steps and
/// Armijo backtracking. Deterministic. Stops when |grad|_inf < grad_tol or
/// after max_iter iterations (meta.converged tells which).
DiscriminatorModel train_discriminator(std::span<const LabeledExample> examples, std::size_t dim,
                                       const TrainConfig& config = {}, std::string vocab_id = {});

/// sigmoid(w.x + b). Throws kVocabMismatch when x has ids outside the model.
double predict_proba(const DiscriminatorModel& model, const SparseVector& x);

double accuracy(const DiscriminatorModel& model, std::span<const LabeledExample> examples);

struct TokenWeight {
  TokenId id = 0;
  double weight = 0.0;
};

struct TopTokens {
  std::vector<TokenWeight> negative;  // ascending weight
  std::vector<TokenWeight> positive;  // descending weight
};

/// k most negative and k largest weights; ties by ascending id. "Positive"
/// means largest, whatever the sign.
TopTokens top_tokens(const DiscriminatorModel& model, std::size_t k);

struct CrossValidation {
  std::vector<double> fold_accuracy;
  double mean_accuracy = 0.0;
};

/// k-fold CV over a seeded shuffle (fold = position mod k). Folds train
/// independently, so kParallel and kSerial agree exactly.
CrossValidation cross_validate(std::span<const LabeledExample> examples, std::size_t dim, const TrainConfig& config,
                               std::size_t folds = 5, Execution exec = Execution::kParallel);

struct LevelDocument {
  std::string text;
  int level = 0;
};

/// Complex-vs-simple model on reading levels: level `complex_level` -> y=0,
/// `simple_level` -> y=1, other levels skipped.
DiscriminatorModel newsela_level_model(std::span<const LevelDocument> docs, const TokenVocab& vocab,
                                       const TrainConfig& config = {}, int complex_level = 0, int simple_level = 3);

}  // namespace plainscore
