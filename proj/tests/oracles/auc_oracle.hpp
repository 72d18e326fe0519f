#pragma once

// AUC as the fraction of (positive, negative) pairs ordered correctly, ties 1/2.
// O(n_pos * n_neg); independent of the rank-based library routine.

#include <cstddef>
#include <vector>

namespace oracle {

struct Labeled {
  double score;
  int label;
};

inline double pairwise_auc(const std::vector<Labeled>& xs) {
  double wins = 0.0;
  std::size_t pairs = 0;
  for (const auto& p : xs) {
    if (p.label != 1) continue;
    for (const auto& q : xs) {
      if (q.label != 0) continue;
      ++pairs;
      if (p.score > q.score) wins += 1.0;
      else if (p.score == q.score) wins += 0.5;
    }
  }
  return wins / double(pairs);
}

}  // namespace oracle
