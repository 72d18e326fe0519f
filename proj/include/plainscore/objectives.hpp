#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "plainscore/penalty.hpp"
#include "plainscore/vocab.hpp"

namespace plainscore {

/// Row t is the decoder's next-token distribution at step t (already
/// conditioned on the source and the target prefix).
class StepDistributions {
 public:
  /// `rows` is steps x vocab_size, row-major. Rows must be non-negative and
  /// sum to 1 within 1e-6; targets, when present, one per row and < vocab_size.
  StepDistributions(std::size_t vocab_size, std::vector<double> rows, std::optional<std::vector<TokenId>> targets = {});

  static StepDistributions from_rows(const std::vector<std::vector<double>>& rows,
                                     std::optional<std::vector<TokenId>> targets = {});

  std::size_t steps() const { return vocab_size_ == 0 ? 0 : rows_.size() / vocab_size_; }
  std::size_t vocab_size() const { return vocab_size_; }
  std::span<const double> row(std::size_t t) const { return {rows_.data() + t * vocab_size_, vocab_size_}; }
  const std::optional<std::vector<TokenId>>& targets() const { return targets_; }

 private:
  std::size_t vocab_size_;
  std::vector<double> rows_;
  std::optional<std::vector<TokenId>> targets_;
};

enum class Reduction { kSum, kMeanPerStep };

/// Probabilities are clamped to 1 - kProbClamp before log(1 - p).
inline constexpr double kProbClamp = 1e-12;

/// Lowest-id argmax.
std::size_t argmax(std::span<const double> xs);

/// -sum_t sum_j [s_j = argmax p_t] w'_j log(1 - p_t(s_j)).
double ul_loss(const StepDistributions& dists, const PenaltySet& penalties, Reduction reduction = Reduction::kSum);

/// Same term without the argmax gate; always >= ul_loss.
double ul_loss_ungated(const StepDistributions& dists, const PenaltySet& penalties,
                       Reduction reduction = Reduction::kSum);

struct CombinedLoss {
  double nll = 0.0;
  double ul = 0.0;
  double total = 0.0;  // nll + alpha * ul
};

/// Throws kMissingTargets without targets, kInvalidArgument for alpha < 0.
CombinedLoss combined_loss(const StepDistributions& dists, const PenaltySet& penalties, double alpha,
                           Reduction reduction = Reduction::kSum);

enum class LossKind { kNll, kUnlikelihood, kUnlikelihoodUngated, kCombined };

/// Logits (steps x vocab, row-major) with per-row softmax.
struct LogitProblem {
  std::size_t vocab_size = 0;
  std::vector<double> logits;
  std::vector<TokenId> targets;  // needed by kNll and kCombined
};

/// Loss as a function of logits; the gate is recomputed from the logits.
double loss_from_logits(LossKind kind, const LogitProblem& problem, const PenaltySet& penalties, double alpha);

/// Analytic gradient of loss_from_logits; the gate is treated as constant.
std::vector<double> gradient_from_logits(LossKind kind, const LogitProblem& problem, const PenaltySet& penalties,
                                         double alpha);

struct GradCheckResult {
  double max_rel_error = 0.0;
  double max_abs_error = 0.0;
  std::size_t n_entries = 0;
};

/// Analytic gradient vs central differences. Per entry the error is
/// |a - n| / max(|a|, |n|, floor). Throws kTieDetected when a row's top two
/// logits are close enough that a probe could flip its argmax.
GradCheckResult grad_check(LossKind kind, const LogitProblem& problem, const PenaltySet& penalties, double alpha,
                           double step = 1e-5, double floor = 1e-8);

/// Keeps the smallest prefix (probability descending, ties by id) with mass
/// >= top_p, zeroes the rest, renormalises. top_p = 1 returns the input.
std::vector<double> nucleus_filter(std::span<const double> dist, double top_p);

}  // namespace plainscore
