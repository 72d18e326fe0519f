#include "plainscore/discriminator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <numeric>
#include <random>

#include "plainscore/error.hpp"
#include "plainscore/numeric.hpp"

namespace plainscore {

namespace {

// log(1 + exp(z)) without overflow.
double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

void require_both_classes(std::span<const LabeledExample> examples) {
  bool seen[2] = {false, false};
  for (const auto& e : examples) {
    if (e.y != 0 && e.y != 1) {
      throw Error(ErrorKind::kInvalidArgument, "labels must be 0 or 1");
    }
    seen[e.y] = true;
  }
  if (!seen[0] || !seen[1]) {
    throw Error(ErrorKind::kSingleClassData, "training data needs both labels");
  }
}

void check_ids(const SparseVector& x, std::size_t dim) {
  if (!x.entries.empty() && static_cast<std::size_t>(x.entries.back().first) >= dim) {
    throw Error(ErrorKind::kVocabMismatch, "feature id " + std::to_string(x.entries.back().first) +
                                               " outside model vocabulary of size " + std::to_string(dim));
  }
}

double inf_norm(std::span<const double> g, double gb) {
  double m = std::abs(gb);
  for (double v : g) {
    m = std::max(m, std::abs(v));
  }
  return m;
}

}  // namespace

std::string DiscriminatorModel::hash() const {
  std::uint64_t h = fnv1a64(vocab_id);
  auto mix = [&h](double v) {
    char bytes[sizeof(double)];
    std::memcpy(bytes, &v, sizeof(double));
    h = fnv1a64(std::string_view(bytes, sizeof(double)), h);
  };
  for (double w : weights) {
    mix(w);
  }
  mix(bias);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

LogisticObjective::LogisticObjective(std::span<const LabeledExample> examples, std::size_t dim, double lambda)
    : examples_(examples), dim_(dim), lambda_(lambda) {
  if (examples.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "objective needs at least one example");
  }
  for (const auto& e : examples) {
    check_ids(e.x, dim);
  }
}

double LogisticObjective::value(std::span<const double> w, double b) const {
  CompensatedSum loss;
  for (const auto& e : examples_) {
    const double z = e.x.dot(w) + b;
    loss.add(e.y == 1 ? softplus(-z) : softplus(z));
  }
  double reg = 0.0;
  for (double v : w) {
    reg += v * v;
  }
  return loss.value() / static_cast<double>(examples_.size()) + 0.5 * lambda_ * reg;
}

double LogisticObjective::value_and_gradient(std::span<const double> w, double b, std::span<double> grad_w,
                                             double& grad_b) const {
  const double inv_n = 1.0 / static_cast<double>(examples_.size());
  for (std::size_t j = 0; j < dim_; ++j) {
    grad_w[j] = lambda_ * w[j];
  }
  grad_b = 0.0;
  CompensatedSum loss;
  double reg = 0.0;
  for (double v : w) {
    reg += v * v;
  }
  for (const auto& e : examples_) {
    const double z = e.x.dot(w) + b;
    loss.add(e.y == 1 ? softplus(-z) : softplus(z));
    const double r = (sigmoid(z) - static_cast<double>(e.y)) * inv_n;
    for (const auto& [id, v] : e.x.entries) {
      grad_w[static_cast<std::size_t>(id)] += r * v;
    }
    grad_b += r;
  }
  return loss.value() * inv_n + 0.5 * lambda_ * reg;
}

DiscriminatorModel train_discriminator(std::span<const LabeledExample> examples, std::size_t dim,
                                       const TrainConfig& config, std::string vocab_id) {
  require_both_classes(examples);
  if (dim == 0) {
    throw Error(ErrorKind::kInvalidArgument, "model dimension must be positive");
  }
  const LogisticObjective objective(examples, dim, config.lambda);

  std::vector<double> w(dim, 0.0), g(dim), w_trial(dim), g_prev(dim), w_prev(dim);
  double b = 0.0;
  double gb = 0.0;
  double f = objective.value_and_gradient(w, b, g, gb);
  double step = 1.0;

  DiscriminatorModel model;
  model.meta.seed = config.seed;
  model.meta.lambda = config.lambda;

  std::size_t iter = 0;
  bool converged = false;
  for (; iter < config.max_iter; ++iter) {
    const double gnorm = inf_norm(g, gb);
    if (gnorm < config.grad_tol) {
      converged = true;
      break;
    }
    double gg = gb * gb;
    for (double v : g) {
      gg += v * v;
    }
    // Armijo backtracking from the trial step.
    bool accepted = false;
    double f_trial = f;
    double b_trial = b;
    for (int halvings = 0; halvings < 80; ++halvings) {
      for (std::size_t j = 0; j < dim; ++j) {
        w_trial[j] = w[j] - step * g[j];
      }
      b_trial = b - step * gb;
      f_trial = objective.value(w_trial, b_trial);
      if (f_trial <= f - 1e-4 * step * gg) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      break;  // no descent possible at double precision
    }
    w_prev.swap(w);
    w.swap(w_trial);
    g_prev.swap(g);
    const double b_prev = b;
    const double gb_prev = gb;
    b = b_trial;
    f = objective.value_and_gradient(w, b, g, gb);

    // Barzilai-Borwein step for the next trial.
    double ss = (b - b_prev) * (b - b_prev);
    double sy = (b - b_prev) * (gb - gb_prev);
    for (std::size_t j = 0; j < dim; ++j) {
      const double s = w[j] - w_prev[j];
      ss += s * s;
      sy += s * (g[j] - g_prev[j]);
    }
    step = sy > 0 ? std::clamp(ss / sy, 1e-10, 1e12) : step * 2.0;
  }
  model.weights = std::move(w);
  model.bias = b;
  model.vocab_id = std::move(vocab_id);
  model.meta.iterations = iter;
  model.meta.converged = converged;
  model.meta.final_loss = f;
  model.meta.grad_inf_norm = inf_norm(g, gb);
  return model;
}

double predict_proba(const DiscriminatorModel& model, const SparseVector& x) {
  check_ids(x, model.dim());
  return sigmoid(x.dot(model.weights) + model.bias);
}

double accuracy(const DiscriminatorModel& model, std::span<const LabeledExample> examples) {
  if (examples.empty()) {
    return 0.0;
  }
  std::size_t correct = 0;
  for (const auto& e : examples) {
    const int pred = predict_proba(model, e.x) >= 0.5 ? 1 : 0;
    correct += pred == e.y ? 1 : 0;
  }
  return static_cast<double>(correct) / static_cast<double>(examples.size());
}

TopTokens top_tokens(const DiscriminatorModel& model, std::size_t k) {
  if (k > model.dim()) {
    throw Error(ErrorKind::kInvalidArgument, "k exceeds vocabulary size");
  }
  std::vector<TokenWeight> all(model.dim());
  for (std::size_t i = 0; i < model.dim(); ++i) {
    all[i] = {static_cast<TokenId>(i), model.weights[i]};
  }
  TopTokens out;
  auto neg = all;
  std::partial_sort(neg.begin(), neg.begin() + static_cast<std::ptrdiff_t>(k), neg.end(), [](const auto& a, const auto& b) {
    return a.weight != b.weight ? a.weight < b.weight : a.id < b.id;
  });
  out.negative.assign(neg.begin(), neg.begin() + static_cast<std::ptrdiff_t>(k));
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end(), [](const auto& a, const auto& b) {
    return a.weight != b.weight ? a.weight > b.weight : a.id < b.id;
  });
  out.positive.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k));
  return out;
}

CrossValidation cross_validate(std::span<const LabeledExample> examples, std::size_t dim, const TrainConfig& config,
                               std::size_t folds, Execution exec) {
  if (folds < 2 || folds > examples.size()) {
    throw Error(ErrorKind::kInvalidArgument, "fold count must lie in [2, number of examples]");
  }
  require_both_classes(examples);
  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(config.seed);
  shuffle_in_place(order, rng);

  CrossValidation cv;
  cv.fold_accuracy = indexed_map(folds, exec, [&](std::size_t fold) {
    std::vector<LabeledExample> train;
    std::vector<LabeledExample> held_out;
    for (std::size_t i = 0; i < order.size(); ++i) {
      (i % folds == fold ? held_out : train).push_back(examples[order[i]]);
    }
    const auto model = train_discriminator(train, dim, config);
    return accuracy(model, held_out);
  });
  cv.mean_accuracy = pairwise_mean(cv.fold_accuracy);
  return cv;
}

DiscriminatorModel newsela_level_model(std::span<const LevelDocument> docs, const TokenVocab& vocab,
                                       const TrainConfig& config, int complex_level, int simple_level) {
  std::vector<LabeledExample> examples;
  for (const auto& d : docs) {
    if (d.level != complex_level && d.level != simple_level) {
      continue;
    }
    try {
      examples.push_back({bow_vector(d.text, vocab).vector, d.level == simple_level ? 1 : 0});
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kAllOOV) {
        throw;
      }
    }
  }
  auto model = train_discriminator(examples, vocab.size(), config, vocab.fingerprint());
  model.meta.source = "newsela";
  return model;
}

}  // namespace plainscore
