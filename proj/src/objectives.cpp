#include "plainscore/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "plainscore/error.hpp"
#include "plainscore/numeric.hpp"

namespace plainscore {

namespace {

void validate_distribution(std::span<const double> row, std::size_t t) {
  double sum = 0.0;
  for (double p : row) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw Error(ErrorKind::kInvalidDistribution, "row " + std::to_string(t) + " has a negative or non-finite entry");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-6) {
    throw Error(ErrorKind::kInvalidDistribution, "row " + std::to_string(t) + " sums to " + std::to_string(sum));
  }
}

void check_penalty_ids(const PenaltySet& penalties, std::size_t vocab_size) {
  for (const auto& e : penalties.entries) {
    if (e.id < 0 || static_cast<std::size_t>(e.id) >= vocab_size) {
      throw Error(ErrorKind::kVocabMismatch, "penalty token " + std::to_string(e.id) + " outside vocabulary of size " +
                                                 std::to_string(vocab_size));
    }
  }
}

double neg_log1m(double p) { return -std::log1p(-std::min(p, 1.0 - kProbClamp)); }

double reduce(double sum, std::size_t steps, Reduction r) {
  return r == Reduction::kMeanPerStep && steps > 0 ? sum / static_cast<double>(steps) : sum;
}

struct RowSoftmax {
  double max = 0.0;
  double log_z = 0.0;  // log sum exp(z - max)
  std::vector<double> p;
};

RowSoftmax softmax(std::span<const double> z) {
  RowSoftmax s;
  s.max = *std::max_element(z.begin(), z.end());
  s.p.resize(z.size());
  double sum = 0.0;
  for (std::size_t v = 0; v < z.size(); ++v) {
    s.p[v] = std::exp(z[v] - s.max);
    sum += s.p[v];
  }
  for (double& x : s.p) {
    x /= sum;
  }
  s.log_z = std::log(sum);
  return s;
}

// 1 - p_s from the other entries, accurate when p_s is close to 1.
double complement(std::span<const double> z, const RowSoftmax& s, std::size_t token) {
  double others = 0.0;
  double all = 0.0;
  for (std::size_t v = 0; v < z.size(); ++v) {
    const double e = std::exp(z[v] - s.max);
    all += e;
    if (v != token) {
      others += e;
    }
  }
  return others / all;
}

std::size_t problem_steps(const LogitProblem& pr) {
  if (pr.vocab_size == 0 || pr.logits.size() % pr.vocab_size != 0) {
    throw Error(ErrorKind::kInvalidArgument, "logit matrix size is not a multiple of the vocabulary size");
  }
  return pr.logits.size() / pr.vocab_size;
}

bool needs_targets(LossKind k) { return k == LossKind::kNll || k == LossKind::kCombined; }
bool has_ul(LossKind k) { return k != LossKind::kNll; }
bool gated(LossKind k) { return k != LossKind::kUnlikelihoodUngated; }

void check_problem(LossKind kind, const LogitProblem& pr, const PenaltySet& penalties, std::size_t steps) {
  check_penalty_ids(penalties, pr.vocab_size);
  if (needs_targets(kind)) {
    if (pr.targets.size() != steps) {
      throw Error(ErrorKind::kMissingTargets, "loss needs one target per step");
    }
    for (auto y : pr.targets) {
      if (y < 0 || static_cast<std::size_t>(y) >= pr.vocab_size) {
        throw Error(ErrorKind::kVocabMismatch, "target id outside vocabulary");
      }
    }
  }
}

}  // namespace

StepDistributions::StepDistributions(std::size_t vocab_size, std::vector<double> rows,
                                     std::optional<std::vector<TokenId>> targets)
    : vocab_size_(vocab_size), rows_(std::move(rows)), targets_(std::move(targets)) {
  if (vocab_size_ == 0 || rows_.size() % vocab_size_ != 0) {
    throw Error(ErrorKind::kInvalidDistribution, "row data is not a whole number of rows of the vocabulary size");
  }
  for (std::size_t t = 0; t < steps(); ++t) {
    validate_distribution(row(t), t);
  }
  if (targets_) {
    if (targets_->size() != steps()) {
      throw Error(ErrorKind::kInvalidArgument, "targets must have one id per row");
    }
    for (auto y : *targets_) {
      if (y < 0 || static_cast<std::size_t>(y) >= vocab_size_) {
        throw Error(ErrorKind::kVocabMismatch, "target id " + std::to_string(y) + " outside vocabulary");
      }
    }
  }
}

StepDistributions StepDistributions::from_rows(const std::vector<std::vector<double>>& rows,
                                               std::optional<std::vector<TokenId>> targets) {
  if (rows.empty()) {
    return StepDistributions(1, {}, std::move(targets));
  }
  const std::size_t v = rows.front().size();
  std::vector<double> flat;
  flat.reserve(rows.size() * v);
  for (const auto& r : rows) {
    if (r.size() != v) {
      throw Error(ErrorKind::kInvalidDistribution, "rows have different lengths");
    }
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return StepDistributions(v, std::move(flat), std::move(targets));
}

std::size_t argmax(std::span<const double> xs) {
  return static_cast<std::size_t>(std::max_element(xs.begin(), xs.end()) - xs.begin());
}

double ul_loss(const StepDistributions& dists, const PenaltySet& penalties, Reduction reduction) {
  check_penalty_ids(penalties, dists.vocab_size());
  std::unordered_map<TokenId, double> weight_of;
  for (const auto& e : penalties.entries) {
    weight_of[e.id] += e.weight;
  }
  CompensatedSum total;
  for (std::size_t t = 0; t < dists.steps(); ++t) {
    const auto row = dists.row(t);
    const auto top = static_cast<TokenId>(argmax(row));
    if (auto it = weight_of.find(top); it != weight_of.end()) {
      total.add(it->second * neg_log1m(row[static_cast<std::size_t>(top)]));
    }
  }
  return reduce(total.value(), dists.steps(), reduction);
}

double ul_loss_ungated(const StepDistributions& dists, const PenaltySet& penalties, Reduction reduction) {
  check_penalty_ids(penalties, dists.vocab_size());
  CompensatedSum total;
  for (std::size_t t = 0; t < dists.steps(); ++t) {
    const auto row = dists.row(t);
    for (const auto& e : penalties.entries) {
      total.add(e.weight * neg_log1m(row[static_cast<std::size_t>(e.id)]));
    }
  }
  return reduce(total.value(), dists.steps(), reduction);
}

CombinedLoss combined_loss(const StepDistributions& dists, const PenaltySet& penalties, double alpha,
                           Reduction reduction) {
  if (!dists.targets()) {
    throw Error(ErrorKind::kMissingTargets, "combined loss needs target ids");
  }
  if (!(alpha >= 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "alpha must be non-negative");
  }
  CompensatedSum nll;
  const auto& y = *dists.targets();
  for (std::size_t t = 0; t < dists.steps(); ++t) {
    nll.add(-std::log(dists.row(t)[static_cast<std::size_t>(y[t])]));
  }
  CombinedLoss out;
  out.nll = reduce(nll.value(), dists.steps(), reduction);
  out.ul = ul_loss(dists, penalties, reduction);
  out.total = out.nll + alpha * out.ul;
  return out;
}

double loss_from_logits(LossKind kind, const LogitProblem& pr, const PenaltySet& penalties, double alpha) {
  const std::size_t steps = problem_steps(pr);
  check_problem(kind, pr, penalties, steps);
  const std::size_t V = pr.vocab_size;
  double nll = 0.0;
  double ul = 0.0;
  for (std::size_t t = 0; t < steps; ++t) {
    const std::span<const double> z(pr.logits.data() + t * V, V);
    const auto s = softmax(z);
    if (needs_targets(kind)) {
      nll += s.max + s.log_z - z[static_cast<std::size_t>(pr.targets[t])];
    }
    if (has_ul(kind)) {
      const std::size_t top = argmax(z);
      for (const auto& e : penalties.entries) {
        const auto id = static_cast<std::size_t>(e.id);
        if (gated(kind) && id != top) {
          continue;
        }
        ul += -e.weight * std::log(std::max(complement(z, s, id), kProbClamp));
      }
    }
  }
  switch (kind) {
    case LossKind::kNll: return nll;
    case LossKind::kUnlikelihood:
    case LossKind::kUnlikelihoodUngated: return ul;
    case LossKind::kCombined: return nll + alpha * ul;
  }
  return 0.0;
}

std::vector<double> gradient_from_logits(LossKind kind, const LogitProblem& pr, const PenaltySet& penalties,
                                         double alpha) {
  const std::size_t steps = problem_steps(pr);
  check_problem(kind, pr, penalties, steps);
  const std::size_t V = pr.vocab_size;
  const double ul_scale = kind == LossKind::kCombined ? alpha : 1.0;
  std::vector<double> grad(pr.logits.size(), 0.0);
  for (std::size_t t = 0; t < steps; ++t) {
    const std::span<const double> z(pr.logits.data() + t * V, V);
    const auto s = softmax(z);
    double* g = grad.data() + t * V;
    if (needs_targets(kind)) {
      for (std::size_t v = 0; v < V; ++v) {
        g[v] += s.p[v];
      }
      g[static_cast<std::size_t>(pr.targets[t])] -= 1.0;
    }
    if (has_ul(kind)) {
      const std::size_t top = argmax(z);
      for (const auto& e : penalties.entries) {
        const auto id = static_cast<std::size_t>(e.id);
        if (gated(kind) && id != top) {
          continue;
        }
        const double q = complement(z, s, id);
        if (q < kProbClamp) {
          continue;  // clamped region: constant loss
        }
        // d/dz_v [-w log(1 - p_s)] = w p_s (delta_sv - p_v) / (1 - p_s)
        const double c = ul_scale * e.weight * s.p[id] / q;
        for (std::size_t v = 0; v < V; ++v) {
          g[v] -= c * s.p[v];
        }
        g[id] += c;
      }
    }
  }
  return grad;
}

GradCheckResult grad_check(LossKind kind, const LogitProblem& problem, const PenaltySet& penalties, double alpha,
                           double step, double floor) {
  const std::size_t steps = problem_steps(problem);
  const std::size_t V = problem.vocab_size;
  if (has_ul(kind) && gated(kind)) {
    for (std::size_t t = 0; t < steps; ++t) {
      std::vector<double> row(problem.logits.begin() + static_cast<std::ptrdiff_t>(t * V),
                              problem.logits.begin() + static_cast<std::ptrdiff_t>((t + 1) * V));
      std::partial_sort(row.begin(), row.begin() + 2, row.end(), std::greater<>());
      if (V > 1 && row[0] - row[1] <= 4.0 * step) {
        throw Error(ErrorKind::kTieDetected, "row " + std::to_string(t) + " has a near-tie for the argmax");
      }
    }
  }
  const auto analytic = gradient_from_logits(kind, problem, penalties, alpha);
  GradCheckResult res;
  LogitProblem probe = problem;
  for (std::size_t i = 0; i < probe.logits.size(); ++i) {
    const double orig = probe.logits[i];
    probe.logits[i] = orig + step;
    const double up = loss_from_logits(kind, probe, penalties, alpha);
    probe.logits[i] = orig - step;
    const double down = loss_from_logits(kind, probe, penalties, alpha);
    probe.logits[i] = orig;
    const double numeric = (up - down) / (2.0 * step);
    const double abs_err = std::abs(analytic[i] - numeric);
    const double denom = std::max({std::abs(analytic[i]), std::abs(numeric), floor});
    res.max_abs_error = std::max(res.max_abs_error, abs_err);
    res.max_rel_error = std::max(res.max_rel_error, abs_err / denom);
    ++res.n_entries;
  }
  return res;
}

std::vector<double> nucleus_filter(std::span<const double> dist, double top_p) {
  if (!(top_p > 0.0 && top_p <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "top_p must lie in (0, 1]");
  }
  if (dist.empty()) {
    throw Error(ErrorKind::kInvalidDistribution, "empty distribution");
  }
  validate_distribution(dist, 0);
  if (top_p == 1.0) {
    return {dist.begin(), dist.end()};
  }
  std::vector<std::size_t> order(dist.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dist[a] > dist[b]; });
  std::vector<double> out(dist.size(), 0.0);
  CompensatedSum mass;
  std::size_t kept = 0;
  while (kept < order.size()) {
    mass.add(dist[order[kept]]);
    ++kept;
    if (mass.value() >= top_p - 1e-12) {
      break;
    }
  }
  const double norm = mass.value();
  for (std::size_t i = 0; i < kept; ++i) {
    out[order[i]] = dist[order[i]] / norm;
  }
  return out;
}

}  // namespace plainscore
