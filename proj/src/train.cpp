#include "dnnlab/train.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "dnnlab/rng.hpp"
#include "dnnlab/stats.hpp"

namespace dnnlab {

Dataset generate_dataset(const TargetFn& phi, std::uint64_t d, double a, double b, double u,
                         double v, std::uint64_t m, std::uint64_t seed) {
  if (!(b > a)) throw DomainError("generate_dataset: b > a required");
  if (!(v > u)) throw DomainError("generate_dataset: v > u required");
  if (m == 0) throw DomainError("generate_dataset: M >= 1 required");
  Dataset data;
  data.seed = seed;
  data.d = d;
  data.a = a;
  data.b = b;
  data.u = u;
  data.v = v;
  data.samples.reserve(m);
  for (std::uint64_t i = 0; i < m; ++i) {
    rng::Stream stream(seed, rng::kStreamData, i);
    std::vector<double> x(d);
    for (std::uint64_t j = 0; j < d; ++j) x[j] = stream.uniform(a, b);
    const double y = phi(x);
    if (!(y >= u && y <= v)) {
      throw ContractError("generate_dataset: phi(x) = " + std::to_string(y) +
                          " outside [u,v]");
    }
    data.samples.push_back({std::move(x), y});
  }
  return data;
}

double empirical_risk(const VectorizedParams& params, double u, double v, const Dataset& data) {
  if (params.arch.out_dim() != 1) throw ShapeError("empirical_risk: out_dim must be 1");
  if (params.arch.in_dim() != data.d) throw ShapeError("empirical_risk: in_dim != data dim");
  std::vector<double> sq;
  sq.reserve(data.samples.size());
  for (const LabeledSample& s : data.samples) {
    const double out = realize_clipped(params, u, v, s.x)[0];
    const double r = out - s.y;
    sq.push_back(r * r);
  }
  return pairwise_sum(sq) / static_cast<double>(sq.size());
}

NoiseSpec NoiseSpec::uniform(double h) {
  if (!(h > 0.0)) throw DomainError("NoiseSpec::uniform: half width > 0 required");
  return {Kind::Uniform, h};
}

CandidatePool sample_candidates(std::uint64_t dfrak, double big_r, std::uint64_t k,
                                std::uint64_t seed) {
  if (!(big_r > 0.0)) throw DomainError("sample_candidates: R > 0 required");
  if (k == 0) throw DomainError("sample_candidates: K >= 1 required");
  CandidatePool pool;
  pool.seed = seed;
  pool.big_r = big_r;
  pool.thetas.reserve(k);
  for (std::uint64_t i = 0; i < k; ++i) {
    rng::Stream stream(seed, rng::kStreamCandidates, i);
    std::vector<double> theta(dfrak);
    for (std::uint64_t j = 0; j < dfrak; ++j) theta[j] = stream.uniform(-big_r, big_r);
    pool.thetas.push_back(std::move(theta));
  }
  return pool;
}

SelectionResult select_min(const CandidatePool& pool, const Architecture& arch, double u,
                           double v, const Dataset& data) {
  if (pool.thetas.empty()) throw ContractError("select_min: empty pool");
  SelectionResult result;
  result.risks.reserve(pool.thetas.size());
  for (const std::vector<double>& theta : pool.thetas) {
    result.risks.push_back(empirical_risk(VectorizedParams(theta, arch), u, v, data));
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < result.risks.size(); ++i) {
    if (result.risks[i] < result.risks[best]) best = i;  // ties keep the smallest k
  }
  result.index = best + 1;
  result.xi = pool.thetas[best];
  return result;
}

namespace {

MonteCarloEstimate mc_error(const VectorizedParams& params, double u, double v,
                            const TargetFn& phi, std::uint64_t d, double a, double b,
                            std::uint64_t n_mc, std::uint64_t seed, bool squared) {
  if (n_mc < 2) throw DomainError("monte carlo error: n_mc >= 2 required");
  if (params.arch.out_dim() != 1 || params.arch.in_dim() != d) {
    throw ShapeError("monte carlo error: network must map R^d -> R");
  }
  std::vector<double> vals;
  vals.reserve(n_mc);
  std::vector<double> x(d);
  for (std::uint64_t i = 0; i < n_mc; ++i) {
    rng::Stream stream(seed, rng::kStreamEvaluation, i);
    for (std::uint64_t j = 0; j < d; ++j) x[j] = stream.uniform(a, b);
    const double diff = realize_clipped(params, u, v, x)[0] - phi(x);
    vals.push_back(squared ? diff * diff : std::fabs(diff));
  }
  const MeanSe ms = mean_and_se(vals);
  return {ms.mean, ms.std_error};
}

}  // namespace

MonteCarloEstimate l2_error(const VectorizedParams& params, double u, double v,
                            const TargetFn& phi, std::uint64_t d, double a, double b,
                            std::uint64_t n_mc, std::uint64_t seed) {
  return mc_error(params, u, v, phi, d, a, b, n_mc, seed, /*squared=*/true);
}

MonteCarloEstimate l1_error(const VectorizedParams& params, double u, double v,
                            const TargetFn& phi, std::uint64_t d, double a, double b,
                            std::uint64_t n_mc, std::uint64_t seed) {
  return mc_error(params, u, v, phi, d, a, b, n_mc, seed, /*squared=*/false);
}

BiasVarianceResult bias_variance_check(const VectorizedParams& f_params, double u, double v,
                                       const TargetFn& phi, const NoiseSpec& noise,
                                       std::uint64_t d, double a, double b, std::uint64_t n_mc,
                                       std::uint64_t seed) {
  if (n_mc < 2) throw DomainError("bias_variance_check: n_mc >= 2 required");
  std::vector<double> lhs_vals, rhs_vals, gap_vals;
  lhs_vals.reserve(n_mc);
  rhs_vals.reserve(n_mc);
  gap_vals.reserve(n_mc);
  std::vector<double> x(d);
  for (std::uint64_t i = 0; i < n_mc; ++i) {
    rng::Stream xs(seed, rng::kStreamEvaluation, i);
    for (std::uint64_t j = 0; j < d; ++j) x[j] = xs.uniform(a, b);
    const double cond_mean = phi(x);  // E[Y|X] for symmetric bounded noise
    double y = cond_mean;
    if (noise.kind == NoiseSpec::Kind::Uniform) {
      rng::Stream ns(seed, rng::kStreamNoise, i);
      y += ns.uniform(-noise.half_width, noise.half_width);
    }
    if (!(y >= u && y <= v)) {
      throw ContractError("bias_variance_check: noise pushes Y outside [u,v]");
    }
    const double fx = realize_clipped(f_params, u, v, x)[0];
    const double lhs = (fx - y) * (fx - y);
    const double rhs = (fx - cond_mean) * (fx - cond_mean) + (y - cond_mean) * (y - cond_mean);
    lhs_vals.push_back(lhs);
    rhs_vals.push_back(rhs);
    gap_vals.push_back(lhs - rhs);
  }
  const MeanSe gap = mean_and_se(gap_vals);
  BiasVarianceResult out;
  out.lhs = pairwise_sum(lhs_vals) / static_cast<double>(n_mc);
  out.rhs = pairwise_sum(rhs_vals) / static_cast<double>(n_mc);
  out.gap = gap.mean;
  out.gap_std_error = gap.std_error;
  return out;
}

}  // namespace dnnlab
