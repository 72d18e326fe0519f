#include "plainscore/penalty.hpp"

#include <algorithm>
#include <cmath>

#include "plainscore/error.hpp"
#include "plainscore/numeric.hpp"

namespace plainscore {

PenaltySet build_penalty_set(const DiscriminatorModel& model, double temperature) {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw Error(ErrorKind::kInvalidArgument, "temperature must be positive and finite");
  }
  std::vector<PenaltyEntry> entries;
  double max_scaled = 0.0;
  for (std::size_t j = 0; j < model.weights.size(); ++j) {
    const double w = model.weights[j];
    if (!std::isfinite(w)) {
      throw Error(ErrorKind::kInvalidArgument, "non-finite weight at id " + std::to_string(j));
    }
    if (w < 0.0) {
      const double scaled = -w / temperature;
      max_scaled = std::max(max_scaled, scaled);
      entries.push_back({static_cast<TokenId>(j), scaled});
    }
  }
  if (entries.empty()) {
    throw Error(ErrorKind::kEmptyPenaltySet, "model has no negative token weights");
  }
  CompensatedSum z;
  for (auto& e : entries) {
    e.weight = std::exp(e.weight - max_scaled);
    z.add(e.weight);
  }
  const double norm = z.value();
  for (auto& e : entries) {
    e.weight /= norm;
  }
  std::stable_sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.weight > b.weight; });

  PenaltySet set;
  set.entries = std::move(entries);
  set.temperature = temperature;
  set.source = model.meta.source.empty() ? "cochrane" : model.meta.source;
  set.vocab_id = model.vocab_id;
  set.model_hash = model.hash();
  return set;
}

DiscriminatorModel combine_models(const DiscriminatorModel& a, const DiscriminatorModel& b) {
  if (a.dim() != b.dim() || a.vocab_id != b.vocab_id) {
    throw Error(ErrorKind::kVocabMismatch, "models use different vocabularies (" + a.vocab_id + " vs " + b.vocab_id + ")");
  }
  DiscriminatorModel out;
  out.weights.resize(a.dim());
  for (std::size_t j = 0; j < a.dim(); ++j) {
    out.weights[j] = a.weights[j] + b.weights[j];
  }
  out.bias = a.bias + b.bias;
  out.vocab_id = a.vocab_id;
  out.meta.source = "both";
  out.meta.lambda = a.meta.lambda;
  out.meta.seed = a.meta.seed;
  out.meta.converged = a.meta.converged && b.meta.converged;
  out.meta.parents = {a.hash(), b.hash()};
  return out;
}

}  // namespace plainscore
