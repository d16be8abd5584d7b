#include "support/stats.hpp"

#include <algorithm>
#include <numeric>

namespace testsupport {

double sample_mean(const std::vector<double>& x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double sample_var(const std::vector<double>& x) {
  const double mu = sample_mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - mu) * (v - mu);
  return ss / static_cast<double>(x.size() - 1);
}

double ks_statistic(std::vector<double> draws,
                    const std::function<double(double)>& cdf) {
  std::sort(draws.begin(), draws.end());
  const double n = static_cast<double>(draws.size());
  double d = 0.0;
  for (std::size_t i = 0; i < draws.size(); ++i) {
    const double F = cdf(draws[i]);
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max(d, std::max(F - lo, hi - F));
  }
  return d;
}

}  // namespace testsupport
