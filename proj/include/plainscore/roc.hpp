#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace plainscore {

struct ScoredLabel {
  double score = 0.0;
  int label = 0;  // 1 positive, 0 negative
};

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
};

struct RocCurve {
  std::vector<RocPoint> points;  // (0,0) ... (1,1), one point per distinct threshold
  double auc = 0.0;              // Mann-Whitney U / (n_pos * n_neg), ties count 1/2
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;
};

/// Throws kSingleClassData unless both labels are present. With
/// higher_means_positive=false, lower scores are taken as evidence for label 1.
RocCurve roc_auc(std::span<const ScoredLabel> scores, bool higher_means_positive = true);

double trapezoid_area(std::span<const RocPoint> points);

}  // namespace plainscore
