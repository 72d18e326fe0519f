#include "plainscore/numeric.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "plainscore/execution.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace plainscore {

double compensated_sum(std::span<const double> xs) {
  CompensatedSum acc;
  for (double x : xs) {
    acc.add(x);
  }
  return acc.value();
}

void ExactSum::add(double x) {
  std::size_t i = 0;
  for (double y : partials_) {
    if (std::abs(x) < std::abs(y)) {
      std::swap(x, y);
    }
    const double hi = x + y;
    const double lo = y - (hi - x);
    if (lo != 0.0) {
      partials_[i++] = lo;
    }
    x = hi;
  }
  partials_.resize(i);
  partials_.push_back(x);
}

double ExactSum::value() const {
  std::size_t n = partials_.size();
  if (n == 0) {
    return 0.0;
  }
  double hi = partials_[--n];
  double lo = 0.0;
  while (n > 0) {
    const double x = hi;
    const double y = partials_[--n];
    hi = x + y;
    lo = y - (hi - x);
    if (lo != 0.0) {
      break;
    }
  }
  // Round half-way cases using the sign of the next partial.
  if (n > 0 && ((lo < 0.0 && partials_[n - 1] < 0.0) || (lo > 0.0 && partials_[n - 1] > 0.0))) {
    const double y = lo * 2.0;
    const double x = hi + y;
    if (y == x - hi) {
      hi = x;
    }
  }
  return hi;
}

double ExactSum::mean(std::size_t n) const {
  const double count = static_cast<double>(n);
  const double q = value() / count;
  ExactSum residual = *this;
  const double prod = q * count;
  residual.add(-prod);
  residual.add(-std::fma(q, count, -prod));
  return q + residual.value() / count;
}

double pairwise_sum(std::span<const double> xs) {
  constexpr std::size_t kBlock = 16;
  if (xs.size() <= kBlock) {
    double s = 0.0;
    for (double x : xs) {
      s += x;
    }
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view key) {
  return splitmix64(splitmix64(seed) ^ fnv1a64(key));
}

std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n) {
  if (n <= 1) {
    return 0;
  }
  // Largest multiple of n representable; draws above it are rejected.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - (std::numeric_limits<std::uint64_t>::max() % n);
  std::uint64_t r = rng();
  while (r >= limit) {
    r = rng();
  }
  return r % n;
}

std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k, std::mt19937_64& rng) {
  k = std::min(k, n);
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::size_t>(uniform_index(rng, n - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace plainscore
