#include "plainscore/stats.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <limits>
#include <vector>

#include "plainscore/error.hpp"
#include "plainscore/numeric.hpp"

namespace plainscore {

PairedTTest paired_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::kInvalidArgument, "paired samples differ in length");
  }
  if (a.size() < 2) {
    throw Error(ErrorKind::kInvalidArgument, "paired t-test needs at least two pairs");
  }
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    d[i] = a[i] - b[i];
  }
  PairedTTest r;
  r.n = d.size();
  r.mean_diff = pairwise_mean(d);
  std::vector<double> sq(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    sq[i] = (d[i] - r.mean_diff) * (d[i] - r.mean_diff);
  }
  const double var = pairwise_sum(sq) / static_cast<double>(r.n - 1);
  const double se = std::sqrt(var / static_cast<double>(r.n));
  if (se == 0.0) {
    if (r.mean_diff == 0.0) {
      r.t = 0.0;
      r.p_value = 1.0;
    } else {
      r.t = std::copysign(std::numeric_limits<double>::infinity(), r.mean_diff);
      r.p_value = 0.0;
    }
    return r;
  }
  r.t = r.mean_diff / se;
  const boost::math::students_t dist(static_cast<double>(r.n - 1));
  r.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(r.t)));
  return r;
}

}  // namespace plainscore
