#pragma once

#include <cstddef>
#include <span>

namespace plainscore {

struct PairedTTest {
  std::size_t n = 0;
  double mean_diff = 0.0;  // mean(a - b)
  double t = 0.0;
  double p_value = 1.0;  // two-sided
};

/// Two-sided paired t-test on a[i] - b[i]. Needs n >= 2. When every
/// difference is identical, t is +-inf with p = 0, or 0 with p = 1 if all are zero.
PairedTTest paired_t_test(std::span<const double> a, std::span<const double> b);

}  // namespace plainscore
