#pragma once

#include <cstdint>
#include <span>

namespace dnnlab {

// Pairwise (tree) summation: deterministic for a fixed element order and
// more accurate than a running sum.
double pairwise_sum(std::span<const double> xs);

struct MeanSe {
  double mean = 0.0;
  double std_error = 0.0;
};

// Sample mean and standard error of the mean (needs n >= 2 for the latter).
MeanSe mean_and_se(std::span<const double> xs);

struct WilsonInterval {
  double lo = 0.0;
  double hi = 1.0;
};

// 95% Wilson score interval for a binomial proportion.
WilsonInterval wilson95(std::uint64_t successes, std::uint64_t trials);

}  // namespace dnnlab
