#include "plainscore/roc.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>

#include "plainscore/error.hpp"

namespace plainscore {

RocCurve roc_auc(std::span<const ScoredLabel> scores, bool higher_means_positive) {
  RocCurve curve;
  for (const auto& s : scores) {
    if (s.label != 0 && s.label != 1) {
      throw Error(ErrorKind::kInvalidArgument, "labels must be 0 or 1");
    }
    (s.label == 1 ? curve.n_pos : curve.n_neg) += 1;
  }
  if (curve.n_pos == 0 || curve.n_neg == 0) {
    throw Error(ErrorKind::kSingleClassData, "ROC needs both labels");
  }
  const double sign = higher_means_positive ? 1.0 : -1.0;
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return sign * scores[a].score < sign * scores[b].score; });

  // Rank-sum with mid-ranks, doubled to stay in integers.
  std::uint64_t rank_sum_x2 = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && sign * scores[order[j]].score == sign * scores[order[i]].score) {
      ++j;
    }
    const std::uint64_t mid_x2 = (i + 1) + j;  // 2 * average of ranks i+1..j
    for (std::size_t k = i; k < j; ++k) {
      if (scores[order[k]].label == 1) {
        rank_sum_x2 += mid_x2;
      }
    }
    i = j;
  }
  const auto np = static_cast<std::uint64_t>(curve.n_pos);
  const auto nn = static_cast<std::uint64_t>(curve.n_neg);
  const std::uint64_t u_x2 = rank_sum_x2 - np * (np + 1);
  curve.auc = static_cast<double>(u_x2) / (2.0 * static_cast<double>(np) * static_cast<double>(nn));

  // Threshold sweep from the most positive score down.
  curve.points.push_back({0.0, 0.0});
  std::size_t tp = 0;
  std::size_t fp = 0;
  for (std::size_t i = order.size(); i > 0;) {
    std::size_t j = i;
    while (j > 0 && sign * scores[order[j - 1]].score == sign * scores[order[i - 1]].score) {
      --j;
      (scores[order[j]].label == 1 ? tp : fp) += 1;
    }
    curve.points.push_back({static_cast<double>(fp) / static_cast<double>(nn), static_cast<double>(tp) / static_cast<double>(np)});
    i = j;
  }
  return curve;
}

double trapezoid_area(std::span<const RocPoint> points) {
  double area = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    area += (points[i].fpr - points[i - 1].fpr) * (points[i].tpr + points[i - 1].tpr) * 0.5;
  }
  return area;
}

}  // namespace plainscore
