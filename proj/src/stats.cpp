#include "dnnlab/stats.hpp"

#include <cmath>

#include "dnnlab/errors.hpp"

namespace dnnlab {

double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 8) {
    double acc = 0.0;
    for (double x : xs) acc += x;
    return acc;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

MeanSe mean_and_se(std::span<const double> xs) {
  if (xs.size() < 2) throw DomainError("mean_and_se: need at least 2 samples");
  const double n = static_cast<double>(xs.size());
  const double mean = pairwise_sum(xs) / n;
  double ssq = 0.0;
  for (double x : xs) {
    const double d = x - mean;
    ssq += d * d;
  }
  return {mean, std::sqrt(ssq / (n * (n - 1.0)))};
}

WilsonInterval wilson95(std::uint64_t successes, std::uint64_t trials) {
  if (trials == 0) throw DomainError("wilson95: zero trials");
  const double z = 1.959963984540054;  // 97.5% normal quantile
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = p + z2 / (2.0 * n);
  const double rad = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  WilsonInterval w;
  // the endpoints are exactly 0 / 1 at the boundary counts; rounding in the
  // general expression must not leak a spurious positive lower bound
  w.lo = successes == 0 ? 0.0 : (center - rad) / denom;
  w.hi = successes == trials ? 1.0 : (center + rad) / denom;
  if (w.lo < 0.0) w.lo = 0.0;
  if (w.hi > 1.0) w.hi = 1.0;
  return w;
}

}  // namespace dnnlab
