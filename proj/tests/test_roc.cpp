#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles/auc_oracle.hpp"
#include "plainscore/error.hpp"
#include "plainscore/roc.hpp"

using namespace plainscore;

namespace {

std::vector<ScoredLabel> make(std::vector<double> pos, std::vector<double> neg) {
  std::vector<ScoredLabel> out;
  for (double s : pos) out.push_back({s, 1});
  for (double s : neg) out.push_back({s, 0});
  return out;
}

std::vector<oracle::Labeled> to_oracle(const std::vector<ScoredLabel>& xs) {
  std::vector<oracle::Labeled> out;
  for (const auto& x : xs) out.push_back({x.score, x.label});
  return out;
}

}  // namespace

TEST_CASE("hand examples") {
  CHECK(roc_auc(make({0.9, 0.8}, {0.1, 0.2})).auc == 1.0);
  CHECK(roc_auc(make({0.8, 0.2}, {0.6, 0.4})).auc == 0.5);
  CHECK(roc_auc(make({0.3, 0.3, 0.3}, {0.3, 0.3})).auc == 0.5);
  CHECK(roc_auc(make({0.9, 0.8}, {0.1, 0.2}), false).auc == 0.0);

  const auto curve = roc_auc(make({0.9, 0.8}, {0.1, 0.2}));
  CHECK(curve.n_pos == 2);
  CHECK(curve.n_neg == 2);
  CHECK(curve.points.front().fpr == 0.0);
  CHECK(curve.points.front().tpr == 0.0);
  CHECK(curve.points.back().fpr == 1.0);
  CHECK(curve.points.back().tpr == 1.0);

  try {
    roc_auc(make({0.1, 0.2}, {}));
    FAIL("expected SingleClassData");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kSingleClassData);
  }
}

TEST_CASE("random instances agree with pairwise counting and the trapezoid area") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng() % 60;
    std::vector<ScoredLabel> xs;
    for (std::size_t i = 0; i < n; ++i) {
      // Coarse scores so that ties are common.
      xs.push_back({static_cast<double>(rng() % 12) / 4.0, static_cast<int>(rng() % 2)});
    }
    xs[0].label = 1;
    xs[1].label = 0;
    const auto curve = roc_auc(xs);
    const double pairwise = oracle::pairwise_auc(to_oracle(xs));
    CHECK(std::abs(curve.auc - pairwise) <= 1e-12);
    CHECK(std::abs(trapezoid_area(curve.points) - pairwise) <= 1e-9);

    for (std::size_t i = 1; i < curve.points.size(); ++i) {
      CHECK(curve.points[i].fpr >= curve.points[i - 1].fpr);
      CHECK(curve.points[i].tpr >= curve.points[i - 1].tpr);
    }

    // Strictly monotone transform leaves the AUC unchanged.
    auto transformed = xs;
    for (auto& x : transformed) x.score = std::exp(3.0 * x.score) - 7.0;
    CHECK(roc_auc(transformed).auc == curve.auc);

    // Flipping labels maps AUC to 1 - AUC.
    auto flipped = xs;
    for (auto& x : flipped) x.label = 1 - x.label;
    CHECK(std::abs(roc_auc(flipped).auc - (1.0 - curve.auc)) <= 1e-12);
  }
}

TEST_CASE("trapezoid area of simple curves") {
  const std::vector<RocPoint> diagonal{{0, 0}, {1, 1}};
  CHECK(trapezoid_area(diagonal) == 0.5);
  const std::vector<RocPoint> step{{0, 0}, {0, 1}, {1, 1}};
  CHECK(trapezoid_area(step) == 1.0);
}
