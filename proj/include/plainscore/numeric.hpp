#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace plainscore {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

double compensated_sum(std::span<const double> xs);

/// Exact running sum kept as non-overlapping partials (Shewchuk). value() is
/// the correctly rounded total; mean(n) is the total divided by n with one
/// residual correction, so n copies of x average to exactly x.
class ExactSum {
 public:
  void add(double x);
  double value() const;
  double mean(std::size_t n) const;

 private:
  std::vector<double> partials_;
};

/// Pairwise (cascade) summation; result depends only on input order.
double pairwise_sum(std::span<const double> xs);

inline double pairwise_mean(std::span<const double> xs) {
  return xs.empty() ? 0.0 : pairwise_sum(xs) / static_cast<double>(xs.size());
}

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL);
std::uint64_t splitmix64(std::uint64_t x);

/// Seed derived from a run seed and a document key; stable across platforms.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view key);

/// Unbiased draw from [0, n) by rejection; identical on every platform.
std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n);

/// Fisher-Yates shuffle on top of uniform_index.
template <typename T>
void shuffle_in_place(std::vector<T>& xs, std::mt19937_64& rng) {
  for (std::size_t i = xs.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_index(rng, i));
    std::swap(xs[i - 1], xs[j]);
  }
}

/// k distinct indices from [0, n), sorted ascending (partial Fisher-Yates).
std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k,
                                                    std::mt19937_64& rng);

inline double sigmoid(double z) {
  if (z >= 0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace plainscore
