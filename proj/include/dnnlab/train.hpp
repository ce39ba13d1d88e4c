#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "dnnlab/net.hpp"

namespace dnnlab {

using TargetFn = std::function<double(std::span<const double>)>;

struct LabeledSample {
  std::vector<double> x;
  double y;
};

struct Dataset {
  std::vector<LabeledSample> samples;
  std::uint64_t seed = 0;
  std::uint64_t d = 1;
  double a = 0.0, b = 1.0;  // input box
  double u = 0.0, v = 1.0;  // label range
};

// M i.i.d. uniform draws on [a,b]^d under the counter RNG, labels y = phi(x).
// Labels outside [u,v] are a contract violation of the caller's phi.
Dataset generate_dataset(const TargetFn& phi, std::uint64_t d, double a, double b, double u,
                         double v, std::uint64_t m, std::uint64_t seed);

// (1/M) sum_m (clipped-net(x_m) - y_m)^2; always in [0, (v-u)^2].
double empirical_risk(const VectorizedParams& params, double u, double v, const Dataset& data);

struct CandidatePool {
  std::vector<std::vector<double>> thetas;  // K vectors in [-R,R]^dfrak
  std::uint64_t seed = 0;
  double big_r = 1.0;
};

// K i.i.d. uniform parameter vectors; candidate k draws from its own
// substream, so pools are prefix-stable in K.
CandidatePool sample_candidates(std::uint64_t dfrak, double big_r, std::uint64_t k,
                                std::uint64_t seed);

struct SelectionResult {
  std::vector<double> xi;     // chosen parameter vector
  std::size_t index = 0;      // 1-based, smallest empirical-risk minimizer
  std::vector<double> risks;  // all K empirical risks
};

SelectionResult select_min(const CandidatePool& pool, const Architecture& arch, double u,
                           double v, const Dataset& data);

struct MonteCarloEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

// Monte Carlo estimate of the squared L2 error of the clipped net against
// phi under the uniform distribution on [a,b]^d, with fresh draws.
MonteCarloEstimate l2_error(const VectorizedParams& params, double u, double v,
                            const TargetFn& phi, std::uint64_t d, double a, double b,
                            std::uint64_t n_mc, std::uint64_t seed);

// Same draws, integrand |net - phi| (first moment).
MonteCarloEstimate l1_error(const VectorizedParams& params, double u, double v,
                            const TargetFn& phi, std::uint64_t d, double a, double b,
                            std::uint64_t n_mc, std::uint64_t seed);

struct NoiseSpec {
  enum class Kind { None, Uniform };
  Kind kind = Kind::None;
  double half_width = 0.0;  // Y = phi(X) + U[-h, h]

  static NoiseSpec none() { return {Kind::None, 0.0}; }
  static NoiseSpec uniform(double h);
};

struct BiasVarianceResult {
  double lhs = 0.0;  // E |f(X) - Y|^2
  double rhs = 0.0;  // E |f(X) - E[Y|X]|^2 + E |Y - E[Y|X]|^2
  double gap = 0.0;
  double gap_std_error = 0.0;
};

// Monte Carlo check of the bias-variance identity with shared draws. The
// conditional mean of the bounded symmetric noise is phi(X), so lhs = rhs in
// expectation and gap is a centered average.
BiasVarianceResult bias_variance_check(const VectorizedParams& f_params, double u, double v,
                                       const TargetFn& phi, const NoiseSpec& noise,
                                       std::uint64_t d, double a, double b, std::uint64_t n_mc,
                                       std::uint64_t seed);

}  // namespace dnnlab
